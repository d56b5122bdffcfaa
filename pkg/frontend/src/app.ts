/** Controller: wires sliders and buttons to the service and re-renders.
 *
 * One solve in flight at a time; slider movement is debounced and a newer
 * request aborts the stale one. Draft values only reach the stored project
 * through the explicit save button (a PUT).
 */

import { ApiError, type PlanningApi } from "./api.js";
import { renderState, type RenderTargets } from "./render.js";
import {
  betaSliderMax,
  budgetSliderMax,
  clearDraft,
  documentWithDraft,
  effectiveBeta,
  effectiveBudget,
  initialState,
  overridesPayload,
  withDraftBeta,
  withDraftBudget,
  withError,
  withReport,
} from "./state.js";
import type { ProjectDocument, WhatIfState } from "./types.js";

export interface AppOptions {
  /** Milliseconds of slider quiet time before a re-solve fires. */
  debounceMs?: number;
}

export interface AppHandle {
  state(): WhatIfState;
  /** Resolves once no solve is pending or in flight. */
  settled(): Promise<void>;
  root: HTMLElement;
}

const DEFAULT_DEBOUNCE_MS = 300;

export async function startApp(
  root: HTMLElement,
  client: PlanningApi,
  projectId: string,
  options: AppOptions = {},
): Promise<AppHandle> {
  const doc = root.ownerDocument;
  const debounceMs = options.debounceMs ?? DEFAULT_DEBOUNCE_MS;
  const document_ = await client.getProject(projectId);
  let state = initialState(projectId, document_);

  // -- static shell ---------------------------------------------------------
  const banner = section(doc, root, "banner-area");
  const summary = section(doc, root, "summary-area");
  const controls = section(doc, root, "controls-area");
  const requirements = section(doc, root, "requirements-area");
  const delivered = section(doc, root, "delivered-area");
  const heatmapControls = section(doc, root, "heatmap-controls");
  const heatmap = section(doc, root, "heatmap-area");

  const budgetSlider = doc.createElement("input");
  budgetSlider.type = "range";
  budgetSlider.min = "0";
  budgetSlider.max = String(budgetSliderMax(document_));
  budgetSlider.step = "1";
  budgetSlider.value = String(effectiveBudget(state));
  budgetSlider.dataset.role = "budget-slider";
  const budgetLabel = doc.createElement("span");
  budgetLabel.dataset.role = "budget-label";
  controls.append(
    labeled(doc, "budget", budgetSlider, budgetLabel),
  );

  const betaLabels = new Map<number, HTMLElement>();
  const valueTypes = document_.value_types ?? [{ index: 1, name: "Wealth" }];
  for (const vt of valueTypes) {
    if (vt.index === 1) continue;
    const slider = doc.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = String(betaSliderMax(document_, vt.index));
    slider.step = "1";
    slider.value = String(effectiveBeta(state, vt.index));
    slider.dataset.role = `beta-slider-${vt.index}`;
    const label = doc.createElement("span");
    label.dataset.role = `beta-label-${vt.index}`;
    betaLabels.set(vt.index, label);
    controls.append(
      labeled(doc, `β ${vt.name}`, slider, label),
    );
    slider.addEventListener("input", () => {
      state = withDraftBeta(state, vt.index, Number(slider.value));
      paint();
      scheduleSolve();
    });
  }

  const saveButton = doc.createElement("button");
  saveButton.textContent = "Save overrides";
  saveButton.dataset.role = "save";
  controls.append(saveButton);

  const typeSelect = doc.createElement("select");
  typeSelect.dataset.role = "influence-type";
  for (const vt of valueTypes) {
    const option = doc.createElement("option");
    option.value = String(vt.index);
    option.textContent = `${vt.index} ${vt.name}`;
    if (vt.index === state.influenceType) option.selected = true;
    typeSelect.append(option);
  }
  heatmapControls.append(typeSelect);

  const targets: RenderTargets = {
    banner,
    summary,
    requirements,
    delivered,
    heatmap,
    budgetLabel,
    betaLabels,
  };

  function paint(): void {
    renderState(doc, targets, state);
  }

  // -- solving --------------------------------------------------------------
  let inFlight: AbortController | null = null;
  let debounceTimer: ReturnType<typeof setTimeout> | null = null;
  let settledResolvers: Array<() => void> = [];
  let lastAction: () => void = () => runSolve();

  function maybeSettle(): void {
    if (debounceTimer === null && inFlight === null) {
      const resolvers = settledResolvers;
      settledResolvers = [];
      for (const resolve of resolvers) resolve();
    }
  }

  function runSolve(): void {
    inFlight?.abort();
    const controller = new AbortController();
    inFlight = controller;
    state = { ...state, solving: true };
    paint();
    client
      .whatIf(projectId, overridesPayload(state.draft), controller.signal)
      .then((report) => {
        if (controller !== inFlight) return;
        state = withReport(state, report);
      })
      .catch((error) => {
        if (controller !== inFlight) return;
        if ((error as Error).name === "AbortError") return;
        const message =
          error instanceof ApiError ? error.message : "service unreachable";
        state = withError(state, message);
      })
      .finally(() => {
        if (controller === inFlight) {
          inFlight = null;
          paint();
          maybeSettle();
        }
      });
  }

  function scheduleSolve(): void {
    lastAction = () => runSolve();
    if (debounceTimer !== null) clearTimeout(debounceTimer);
    debounceTimer = setTimeout(() => {
      debounceTimer = null;
      runSolve();
    }, debounceMs);
  }

  async function loadInfluence(): Promise<void> {
    try {
      const payload = await client.influence(projectId, state.influenceType);
      state = { ...state, influence: payload };
    } catch (error) {
      const message =
        error instanceof ApiError ? error.message : "service unreachable";
      state = withError(state, message);
    }
    paint();
  }

  budgetSlider.addEventListener("input", () => {
    state = withDraftBudget(state, Number(budgetSlider.value));
    paint();
    scheduleSolve();
  });

  typeSelect.addEventListener("change", () => {
    state = { ...state, influenceType: Number(typeSelect.value) };
    lastAction = () => void loadInfluence();
    void loadInfluence();
  });

  saveButton.addEventListener("click", () => {
    const merged = documentWithDraft(state);
    lastAction = () => saveButton.click();
    inFlight?.abort();
    inFlight = new AbortController();
    const controller = inFlight;
    client
      .putProject(projectId, merged)
      .then(() => client.getProject(projectId))
      .then((fresh: ProjectDocument) => {
        if (controller !== inFlight) return;
        state = clearDraft(state, fresh);
        inFlight = null;
        runSolve();
      })
      .catch((error) => {
        if (controller !== inFlight) return;
        inFlight = null;
        const message =
          error instanceof ApiError ? error.message : "service unreachable";
        state = withError(state, message);
        paint();
        maybeSettle();
      });
  });

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action === "retry") {
      lastAction();
    }
  });

  paint();
  runSolve();
  await loadInfluence();

  return {
    state: () => state,
    settled: () =>
      new Promise<void>((resolve) => {
        settledResolvers.push(resolve);
        maybeSettle();
      }),
    root,
  };
}

function section(doc: Document, root: HTMLElement, className: string): HTMLElement {
  const node = doc.createElement("div");
  node.className = className;
  root.append(node);
  return node;
}

function labeled(
  doc: Document,
  caption: string,
  slider: HTMLInputElement,
  valueLabel: HTMLElement,
): HTMLElement {
  const wrap = doc.createElement("label");
  wrap.className = "control";
  const text = doc.createElement("span");
  text.className = "caption";
  text.textContent = caption;
  wrap.append(text, slider, valueLabel);
  return wrap;
}
