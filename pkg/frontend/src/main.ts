/** Browser entry point: resolve the API base and project id, then boot.
 *
 * The project id comes from the location hash (#<id>). Without one, the
 * page offers a paste box that POSTs a document and reloads onto its id.
 */

import { ApiClient } from "./api.js";
import { startApp } from "./app.js";

function apiBase(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? "http://127.0.0.1:8000";
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  const client = new ApiClient(apiBase());
  const projectId = window.location.hash.replace(/^#/, "");
  if (!projectId) {
    renderLoader(root, client);
    return;
  }
  try {
    await startApp(root, client, projectId);
  } catch (error) {
    root.textContent = `could not load project ${projectId}: ${String(error)}`;
  }
}

function renderLoader(root: HTMLElement, client: ApiClient): void {
  const intro = document.createElement("p");
  intro.textContent =
    "No project selected. Paste a project document to store it, or open " +
    "the page as #<project-id>.";
  const box = document.createElement("textarea");
  box.rows = 12;
  box.cols = 70;
  const button = document.createElement("button");
  button.textContent = "Store project";
  const note = document.createElement("p");
  button.addEventListener("click", () => {
    client
      .createProject(box.value)
      .then((id) => {
        window.location.hash = id;
        window.location.reload();
      })
      .catch((error) => {
        note.textContent = String(error);
      });
  });
  root.append(intro, box, button, note);
}

void boot();
