/** Pure state transitions and view derivations for the what-if explorer.
 *
 * Nothing here computes plans: the rendered selection and penalties always
 * come verbatim from the most recent service response.
 */

import type {
  DraftOverrides,
  ProjectDocument,
  SolveReportPayload,
  WhatIfState,
} from "./types.js";

export function initialState(
  projectId: string,
  document: ProjectDocument,
): WhatIfState {
  return {
    projectId,
    document,
    draft: { betas: {} },
    lastReport: null,
    influenceType: firstNonEconomicType(document),
    influence: null,
    error: null,
    solving: false,
  };
}

function firstNonEconomicType(document: ProjectDocument): number {
  const types = document.value_types ?? [{ index: 1, name: "Wealth" }];
  return types.length > 1 ? types[1].index : 1;
}

export function withDraftBudget(state: WhatIfState, budget: number): WhatIfState {
  return { ...state, draft: { ...state.draft, budget } };
}

export function withDraftBeta(
  state: WhatIfState,
  type: number,
  bound: number,
): WhatIfState {
  return {
    ...state,
    draft: { ...state.draft, betas: { ...state.draft.betas, [type]: bound } },
  };
}

export function withReport(
  state: WhatIfState,
  report: SolveReportPayload,
): WhatIfState {
  return { ...state, lastReport: report, error: null, solving: false };
}

export function withError(state: WhatIfState, message: string): WhatIfState {
  return { ...state, error: message, solving: false };
}

export function clearDraft(
  state: WhatIfState,
  document: ProjectDocument,
): WhatIfState {
  return { ...state, document, draft: { betas: {} } };
}

/** The override body a what-if call should carry right now. */
export function overridesPayload(draft: DraftOverrides): {
  budget?: number;
  betas?: Record<string, number>;
} {
  const payload: { budget?: number; betas?: Record<string, number> } = {};
  if (draft.budget !== undefined) payload.budget = draft.budget;
  if (Object.keys(draft.betas).length > 0) payload.betas = draft.betas;
  return payload;
}

/** The stored document with the draft merged in, for an explicit save. */
export function documentWithDraft(state: WhatIfState): ProjectDocument {
  const merged: ProjectDocument = {
    ...state.document,
    betas: { ...(state.document.betas ?? {}) },
  };
  if (state.draft.budget !== undefined) merged.budget = state.draft.budget;
  for (const [type, bound] of Object.entries(state.draft.betas)) {
    merged.betas![type] = bound;
  }
  return merged;
}

export function effectiveBudget(state: WhatIfState): number {
  return state.draft.budget ?? Number(state.document.budget);
}

export function effectiveBeta(state: WhatIfState, type: number): number {
  const draft = state.draft.betas[type];
  if (draft !== undefined) return draft;
  return Number(state.document.betas?.[type] ?? 0);
}

export interface RequirementRow {
  id: number;
  label: string;
  cost: number;
  economicValue: number;
  selected: boolean;
  maxPenalty: number;
}

/** Table rows: document facts joined with the latest report. */
export function requirementRows(state: WhatIfState): RequirementRow[] {
  const report = state.lastReport;
  const selected = new Set(report?.selection ?? []);
  return state.document.requirements.map((req) => {
    const penalties = report?.penalties?.[String(req.id)] ?? {};
    const worst = Math.max(0, ...Object.values(penalties));
    return {
      id: req.id,
      label: req.label,
      cost: Number(req.cost),
      economicValue: Number(req.expected_values[0] ?? 0),
      selected: selected.has(req.id),
      maxPenalty: worst,
    };
  });
}

export interface DeliveredBar {
  type: number;
  name: string;
  delivered: number;
  bound: number | null;
  /** Penalty-free total of this type's expected values: the bar scale. */
  reachable: number;
}

export function deliveredBars(state: WhatIfState): DeliveredBar[] {
  const types = state.document.value_types ?? [{ index: 1, name: "Wealth" }];
  return types.map((vt) => {
    const delivered = state.lastReport?.delivered?.[String(vt.index)] ?? 0;
    const bound = vt.index === 1 ? null : effectiveBeta(state, vt.index);
    const reachable = state.document.requirements.reduce(
      (sum, req) => sum + Number(req.expected_values[vt.index - 1] ?? 0),
      0,
    );
    return { type: vt.index, name: vt.name, delivered, bound, reachable };
  });
}

/** Budget slider range: generous headroom above the total cost. */
export function budgetSliderMax(document: ProjectDocument): number {
  const total = document.requirements.reduce(
    (sum, req) => sum + Number(req.cost),
    0,
  );
  return Math.max(1, Math.ceil(total * 1.25));
}

/** Beta sliders deliberately range past what any plan can deliver, so
 * stakeholders can discover the infeasibility frontier. */
export function betaSliderMax(
  document: ProjectDocument,
  type: number,
): number {
  const reachable = document.requirements.reduce(
    (sum, req) => sum + Number(req.expected_values[type - 1] ?? 0),
    0,
  );
  return Math.max(1, Math.ceil(reachable * 1.5));
}
