/** Wire types matching the service's machine-readable payloads. */

export interface ValueTypeEntry {
  index: number;
  name: string;
}

export interface RequirementDoc {
  id: number;
  label: string;
  cost: number | string;
  expected_values: Array<number | string>;
}

export interface ProjectDocument {
  budget: number | string;
  requirements: RequirementDoc[];
  value_types?: ValueTypeEntry[];
  graphs?: unknown[];
  precedences?: unknown[];
  betas?: Record<string, number | string>;
}

export type SolveStatus =
  | "optimal"
  | "infeasible"
  | "timeout_with_incumbent"
  | "timeout_no_incumbent";

export interface SolveReportPayload {
  status: SolveStatus;
  objective: number | null;
  /** Selected requirement ids, 1-based. */
  selection: number[];
  /** Delivered value per type index (as string keys), null when infeasible. */
  delivered: Record<string, number> | null;
  /** Per requirement id, per type index: the penalty fraction in [0, 1]. */
  penalties: Record<string, Record<string, number>> | null;
}

export interface InfluencePayload {
  type: number;
  values: number[][];
}

/** Draft slider values; only sent to the store by an explicit save. */
export interface DraftOverrides {
  budget?: number;
  betas: Record<string, number>;
}

export interface WhatIfState {
  projectId: string;
  document: ProjectDocument;
  draft: DraftOverrides;
  lastReport: SolveReportPayload | null;
  influenceType: number;
  influence: InfluencePayload | null;
  /** Inline error from a failed API call, if any. */
  error: string | null;
  solving: boolean;
}
