// Pure string renderers: ranked table, fit label, and the log-log SVG
// chart. Everything displayed is copied verbatim from a TldResponse; the
// only arithmetic here is pixel placement.

import { TldResponse } from "./api.js";

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = 50;

function esc(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

export function renderTable(response: TldResponse): string {
    const rows = response.ranked
        .map(
            (e) =>
                `<tr><td>${e.rank}</td><td>${esc(e.tld)}</td>` +
                `<td>${e.count}</td></tr>`,
        )
        .join("\n");
    return (
        `<table class="tld-table">\n` +
        `<thead><tr><th>rank</th><th>tld</th><th>count</th></tr></thead>\n` +
        `<tbody>\n${rows}\n</tbody>\n</table>`
    );
}

export function renderFitLabel(response: TldResponse): string {
    if (response.fit === null) {
        return "fit: not enough distinct TLDs (need ≥ 3)";
    }
    const f = response.fit;
    return `fit [${f.method}]: a = ${f.a}, C = ${f.C}, r² = ${f.r2}`;
}

export function renderSummary(response: TldResponse): string {
    const quota =
        response.quota_remaining === null
            ? ""
            : `, quota remaining ${response.quota_remaining}`;
    return (
        `${response.n_analyzed} URLs analyzed ` +
        `(${response.skipped} skipped)${quota}`
    );
}

interface Scale {
    (v: number): number;
}

function logScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
    const a = Math.log(lo);
    const b = Math.log(hi);
    if (a === b) {
        // degenerate domain (single point): pin to the middle
        return () => (pxLo + pxHi) / 2;
    }
    return (v) => pxLo + ((Math.log(v) - a) / (b - a)) * (pxHi - pxLo);
}

/**
 * Log-log scatter of (rank, count) with the fitted line C*r^(-a) drawn
 * across the rank range. Fewer than 1 entry yields an empty-state message;
 * a missing fit yields points only.
 */
export function renderChart(response: TldResponse): string {
    const head =
        `<svg xmlns="http://www.w3.org/2000/svg" ` +
        `width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}">`;
    if (response.ranked.length === 0) {
        return (
            `${head}<text class="empty" x="${WIDTH / 2}" y="${HEIGHT / 2}" ` +
            `text-anchor="middle">no data</text></svg>`
        );
    }
    const ranks = response.ranked.map((e) => e.rank);
    const counts = response.ranked.map((e) => e.count);
    const x = logScale(
        Math.min(...ranks),
        Math.max(...ranks),
        MARGIN,
        WIDTH - MARGIN,
    );
    // SVG y grows downward, so the pixel range is inverted
    const y = logScale(
        Math.min(...counts),
        Math.max(...counts),
        HEIGHT - MARGIN,
        MARGIN,
    );
    const parts: string[] = [head];
    parts.push(
        `<line class="axis" x1="${MARGIN}" y1="${HEIGHT - MARGIN}" ` +
        `x2="${WIDTH - MARGIN}" y2="${HEIGHT - MARGIN}"/>`,
        `<line class="axis" x1="${MARGIN}" y1="${MARGIN}" ` +
        `x2="${MARGIN}" y2="${HEIGHT - MARGIN}"/>`,
        `<text class="xlabel" x="${WIDTH / 2}" y="${HEIGHT - 12}" ` +
        `text-anchor="middle">rank (log)</text>`,
        `<text class="ylabel" x="14" y="${HEIGHT / 2}" text-anchor="middle" ` +
        `transform="rotate(-90 14 ${HEIGHT / 2})">count (log)</text>`,
    );
    if (response.fit !== null && response.ranked.length >= 2) {
        const f = response.fit;
        const rLo = Math.min(...ranks);
        const rHi = Math.max(...ranks);
        const predict = (r: number) => f.C * Math.pow(r, -f.a);
        parts.push(
            `<polyline class="fit" fill="none" points="` +
            `${x(rLo)},${y(predict(rLo))} ${x(rHi)},${y(predict(rHi))}"/>`,
        );
    }
    for (const e of response.ranked) {
        parts.push(
            `<circle class="point" cx="${x(e.rank)}" cy="${y(e.count)}" ` +
            `r="3"><title>${esc(e.tld)}: ${e.count}</title></circle>`,
        );
    }
    parts.push("</svg>");
    return parts.join("\n");
}

export function renderErrorBanner(message: string): string {
    return `<div class="error-banner" role="alert">${esc(message)}</div>`;
}
