/** Thin typed client for the planning service; all math stays server-side. */

import type {
  InfluencePayload,
  ProjectDocument,
  SolveReportPayload,
  ValueTypeEntry,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

/** A 409 carrying a solve report (infeasible / no incumbent) is still a
 * report the UI can render, so it is returned, not thrown. */
async function readReport(response: Response): Promise<SolveReportPayload> {
  if (response.ok || response.status === 409) {
    return (await response.json()) as SolveReportPayload;
  }
  throw new ApiError(await errorDetail(response), response.status);
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: string };
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    /* fall through to the generic message */
  }
  return `request failed with status ${response.status}`;
}

/** What the UI needs from the service; ApiClient is the HTTP implementation
 * and tests substitute stubs. */
export interface PlanningApi {
  valueTypes(): Promise<ValueTypeEntry[]>;
  createProject(document: ProjectDocument | string): Promise<string>;
  getProject(id: string): Promise<ProjectDocument>;
  putProject(id: string, document: ProjectDocument): Promise<void>;
  whatIf(
    id: string,
    overrides: { budget?: number; betas?: Record<string, number> },
    signal?: AbortSignal,
  ): Promise<SolveReportPayload>;
  influence(id: string, type: number): Promise<InfluencePayload>;
}

export class ApiClient implements PlanningApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) =>
      globalThis.fetch(input, init),
  ) {}

  private async checked(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      throw new ApiError(await errorDetail(response), response.status);
    }
    return response;
  }

  async valueTypes(): Promise<ValueTypeEntry[]> {
    const response = await this.checked("/api/value-types");
    return (await response.json()) as ValueTypeEntry[];
  }

  async createProject(document: ProjectDocument | string): Promise<string> {
    const body =
      typeof document === "string" ? document : JSON.stringify(document);
    const response = await this.checked("/api/projects", {
      method: "POST",
      body,
    });
    return ((await response.json()) as { id: string }).id;
  }

  async getProject(id: string): Promise<ProjectDocument> {
    const response = await this.checked(`/api/projects/${id}`);
    return (await response.json()) as ProjectDocument;
  }

  async putProject(id: string, document: ProjectDocument): Promise<void> {
    await this.checked(`/api/projects/${id}`, {
      method: "PUT",
      body: JSON.stringify(document),
    });
  }

  async whatIf(
    id: string,
    overrides: { budget?: number; betas?: Record<string, number> },
    signal?: AbortSignal,
  ): Promise<SolveReportPayload> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/projects/${id}/whatif`,
      { method: "POST", body: JSON.stringify(overrides), signal },
    );
    return readReport(response);
  }

  async influence(id: string, type: number): Promise<InfluencePayload> {
    const response = await this.checked(
      `/api/projects/${id}/influence?type=${type}`,
    );
    return (await response.json()) as InfluencePayload;
  }
}
