/** DOM rendering for the what-if explorer; plain elements, no framework. */

import {
  deliveredBars,
  effectiveBeta,
  effectiveBudget,
  requirementRows,
} from "./state.js";
import type { WhatIfState } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderBanner(doc: Document, state: WhatIfState): HTMLElement | null {
  if (state.error !== null) {
    const banner = el(doc, "div", "banner banner-error");
    banner.append(el(doc, "span", undefined, `Request failed: ${state.error}`));
    const retry = el(doc, "button", "retry", "Retry");
    retry.dataset.action = "retry";
    banner.append(retry);
    return banner;
  }
  const status = state.lastReport?.status;
  if (status === "infeasible" || status === "timeout_no_incumbent") {
    const message =
      status === "infeasible"
        ? "No feasible plan: the value bounds cannot be met within this budget."
        : "The solver ran out of time before finding any feasible plan.";
    return el(doc, "div", "banner banner-infeasible", message);
  }
  if (status === "timeout_with_incumbent") {
    return el(
      doc,
      "div",
      "banner banner-warning",
      "Best plan found so far (search timed out before proving optimality).",
    );
  }
  return null;
}

function renderSummary(doc: Document, state: WhatIfState): HTMLElement {
  const summary = el(doc, "div", "summary");
  const objective = state.lastReport?.objective;
  summary.append(
    el(
      doc,
      "span",
      "objective",
      objective === null || objective === undefined
        ? "objective: -"
        : `objective: ${formatNumber(objective)}`,
    ),
  );
  const selection = state.lastReport?.selection ?? [];
  const text = selection.length ? `{${selection.join(", ")}}` : "{}";
  const chip = el(doc, "span", "selection", `selected: ${text}`);
  chip.dataset.role = "selection";
  summary.append(chip);
  if (state.solving) summary.append(el(doc, "span", "spinner", "solving..."));
  return summary;
}

function renderRequirementTable(doc: Document, state: WhatIfState): HTMLElement {
  const table = el(doc, "table", "requirements");
  const head = el(doc, "tr");
  for (const title of ["", "id", "requirement", "cost", "value", "max penalty"]) {
    head.append(el(doc, "th", undefined, title));
  }
  table.append(head);
  for (const row of requirementRows(state)) {
    const tr = el(doc, "tr", row.selected ? "selected" : "excluded");
    tr.dataset.requirement = String(row.id);
    tr.append(el(doc, "td", "mark", row.selected ? "✓" : "–"));
    tr.append(el(doc, "td", undefined, String(row.id)));
    tr.append(el(doc, "td", "label", row.label));
    tr.append(el(doc, "td", undefined, formatNumber(row.cost)));
    tr.append(el(doc, "td", undefined, formatNumber(row.economicValue)));
    const penalty = el(doc, "td", "penalty", row.maxPenalty.toFixed(2));
    tr.append(penalty);
    table.append(tr);
  }
  return table;
}

function renderDelivered(doc: Document, state: WhatIfState): HTMLElement {
  const wrap = el(doc, "div", "delivered");
  for (const bar of deliveredBars(state)) {
    const rowEl = el(doc, "div", "delivered-row");
    rowEl.dataset.valueType = String(bar.type);
    rowEl.append(
      el(doc, "span", "delivered-name", `${bar.type} ${bar.name}`),
    );
    const scale = Math.max(bar.reachable, bar.delivered, bar.bound ?? 0, 1);
    const track = el(doc, "div", "bar-track");
    const fill = el(doc, "div", "bar-fill");
    fill.style.width = `${(100 * bar.delivered) / scale}%`;
    const met = bar.bound === null || bar.delivered >= bar.bound;
    fill.classList.add(met ? "bar-ok" : "bar-short");
    track.append(fill);
    if (bar.bound !== null) {
      const marker = el(doc, "div", "bound-marker");
      marker.style.left = `${(100 * bar.bound) / scale}%`;
      marker.title = `bound ${formatNumber(bar.bound)}`;
      track.append(marker);
    }
    rowEl.append(track);
    rowEl.append(
      el(doc, "span", "delivered-amount", formatNumber(bar.delivered)),
    );
    wrap.append(rowEl);
  }
  return wrap;
}

function heatColor(value: number): string {
  if (value === 0) return "transparent";
  const alpha = Math.min(1, Math.abs(value)).toFixed(3);
  return value > 0
    ? `rgba(46, 125, 50, ${alpha})`
    : `rgba(198, 40, 40, ${alpha})`;
}

function renderHeatmap(doc: Document, state: WhatIfState): HTMLElement {
  const wrap = el(doc, "div", "influence");
  if (!state.influence) {
    wrap.append(el(doc, "p", "hint", "influence matrix not loaded"));
    return wrap;
  }
  const table = el(doc, "table", "heatmap");
  const head = el(doc, "tr");
  head.append(el(doc, "th"));
  state.influence.values.forEach((_, j) =>
    head.append(el(doc, "th", undefined, `r${j + 1}`)),
  );
  table.append(head);
  state.influence.values.forEach((row, i) => {
    const tr = el(doc, "tr");
    tr.append(el(doc, "th", undefined, `r${i + 1}`));
    row.forEach((value) => {
      const cell = el(doc, "td", "heat", value.toFixed(2));
      cell.style.backgroundColor = heatColor(value);
      tr.append(cell);
    });
    table.append(tr);
  });
  wrap.append(table);
  return wrap;
}

function formatNumber(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(2);
}

export interface RenderTargets {
  banner: HTMLElement;
  summary: HTMLElement;
  requirements: HTMLElement;
  delivered: HTMLElement;
  heatmap: HTMLElement;
  budgetLabel: HTMLElement;
  betaLabels: Map<number, HTMLElement>;
}

/** Replace the dynamic regions from the current state. Controls (sliders,
 * selects, buttons) are created once by the app shell and never rebuilt
 * here, so focus and drag interactions survive re-renders. */
export function renderState(
  doc: Document,
  targets: RenderTargets,
  state: WhatIfState,
): void {
  targets.banner.replaceChildren();
  const banner = renderBanner(doc, state);
  if (banner) targets.banner.append(banner);

  targets.summary.replaceChildren(renderSummary(doc, state));
  targets.requirements.replaceChildren(renderRequirementTable(doc, state));
  targets.delivered.replaceChildren(renderDelivered(doc, state));
  targets.heatmap.replaceChildren(renderHeatmap(doc, state));

  targets.budgetLabel.textContent = formatNumber(effectiveBudget(state));
  for (const [type, label] of targets.betaLabels) {
    label.textContent = formatNumber(effectiveBeta(state, type));
  }
}
