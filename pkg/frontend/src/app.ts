// DOM wiring for the single-page app. All logic lives in state.ts and
// render.ts; this file only moves strings into elements.

import { initialState, submitQuery } from "./state.js";
import {
    renderChart,
    renderErrorBanner,
    renderFitLabel,
    renderSummary,
    renderTable,
} from "./render.js";

const state = initialState();

function baseUrl(): string {
    const input = document.getElementById("base-url") as HTMLInputElement;
    return input.value.replace(/\/$/, "") || "http://127.0.0.1:8077";
}

function paint(): void {
    const table = document.getElementById("table")!;
    const chart = document.getElementById("chart")!;
    const status = document.getElementById("status")!;
    if (state.error !== null) {
        status.innerHTML = renderErrorBanner(state.error);
    } else if (state.loading) {
        status.textContent = "loading…";
    } else if (state.response !== null) {
        status.textContent = renderSummary(state.response);
    } else {
        status.textContent = "";
    }
    if (state.response !== null) {
        // table, fit label, and chart always show the same response
        table.innerHTML = renderTable(state.response);
        document.getElementById("fit")!.textContent =
            renderFitLabel(state.response);
        chart.innerHTML = renderChart(state.response);
    }
}

async function onSubmit(event: Event): Promise<void> {
    event.preventDefault();
    state.query = (document.getElementById("query") as HTMLInputElement).value;
    state.n = Number(
        (document.getElementById("n") as HTMLInputElement).value || "250",
    );
    state.backend = (
        document.getElementById("backend") as HTMLInputElement
    ).value;
    state.fitMethod = (
        document.getElementById("fit-method") as HTMLSelectElement
    ).value;
    paint();
    await submitQuery(state, baseUrl());
    paint();
}

export function main(): void {
    document.getElementById("form")!.addEventListener("submit", onSubmit);
    paint();
}

if (typeof document !== "undefined") {
    main();
}
