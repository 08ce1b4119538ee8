// UI state and the submission flow. Submissions carry a monotonically
// increasing request id; a response whose id is no longer current is
// discarded, so a slow older request can never overwrite a newer one.

import { ApiError, Fetcher, TldResponse, fetchTld } from "./api.js";

export const DEFAULT_N = 250;

export interface UiState {
    query: string;
    n: number;
    backend: string;
    fitMethod: string;
    response: TldResponse | null;
    loading: boolean;
    error: string | null;
    requestSeq: number;
}

export function initialState(): UiState {
    return {
        query: "",
        n: DEFAULT_N,
        backend: "",
        fitMethod: "ols-loglog",
        response: null,
        loading: false,
        error: null,
        requestSeq: 0,
    };
}

export function errorMessage(err: unknown): string {
    if (err instanceof ApiError) {
        if (err.body.kind === "quota" && err.body.reset) {
            return `${err.body.error} (quota resets ${err.body.reset})`;
        }
        return err.body.error;
    }
    return String(err);
}

/**
 * Submit the current query. Mutates `state` in place and returns whether
 * this submission's response was applied (false when superseded or empty).
 */
export async function submitQuery(
    state: UiState,
    baseUrl: string,
    fetcher?: Fetcher,
): Promise<boolean> {
    if (!state.query.trim()) {
        state.error = "enter a query first";
        return false;
    }
    const id = ++state.requestSeq;
    state.loading = true;
    state.error = null;
    try {
        const response = await fetchTld(
            baseUrl,
            {
                query: state.query,
                n: state.n,
                backend: state.backend || undefined,
                fit: state.fitMethod,
            },
            fetcher,
        );
        if (id !== state.requestSeq) {
            return false; // superseded by a newer submission
        }
        state.response = response;
        state.loading = false;
        return true;
    } catch (err) {
        if (id !== state.requestSeq) {
            return false;
        }
        state.loading = false;
        state.error = errorMessage(err);
        return false;
    }
}
