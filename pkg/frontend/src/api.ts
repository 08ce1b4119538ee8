// Typed client for the live-service /api/tld endpoint. All numbers the UI
// shows come verbatim from these response bodies; the client does no math.

export interface RankedEntry {
    rank: number;
    tld: string;
    count: number;
}

export interface FitDoc {
    a: number;
    C: number;
    r2: number;
    n_points: number;
    method: string;
}

export interface TldResponse {
    query: string;
    n_requested: number;
    n_analyzed: number;
    skipped: number;
    ranked: RankedEntry[];
    fit: FitDoc | null;
    quota_remaining: number | null;
}

export interface ErrorBody {
    error: string;
    kind: string;
    reset?: string;
}

export class ApiError extends Error {
    constructor(
        public status: number,
        public body: ErrorBody,
    ) {
        super(body.error);
    }
}

export interface TldRequest {
    query: string;
    n: number;
    backend?: string;
    fit: string;
}

export type Fetcher = (url: string) => Promise<Response>;

export async function fetchTld(
    baseUrl: string,
    req: TldRequest,
    fetcher: Fetcher = fetch,
): Promise<TldResponse> {
    const params = new URLSearchParams({
        q: req.query,
        n: String(req.n),
        fit: req.fit,
    });
    if (req.backend) {
        params.set("backend", req.backend);
    }
    let resp: Response;
    try {
        resp = await fetcher(`${baseUrl}/api/tld?${params}`);
    } catch (err) {
        throw new ApiError(0, {
            error: `network failure: ${err}`,
            kind: "network",
        });
    }
    const body = await resp.json();
    if (!resp.ok) {
        throw new ApiError(resp.status, body as ErrorBody);
    }
    return body as TldResponse;
}
