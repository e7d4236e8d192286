/** Browser entry point: resolve the API base, pick up a session id from
 * the URL hash, mount. The hash is the only routing state (#s=<id>). */

import { setApiBase } from "./api.js";
import { boot, mountApp } from "./app.js";

function resolveApiBase(): string {
  const override = (window as { CRITERIA_LOOP_API?: string }).CRITERIA_LOOP_API;
  if (override) return override;
  const param = new URLSearchParams(location.search).get("api");
  if (param) return param;
  return "";
}

function sessionFromHash(): string | null {
  const params = new URLSearchParams(location.hash.replace(/^#/, ""));
  return params.get("s") || null;
}

setApiBase(resolveApiBase());

const root = document.getElementById("app");
if (root) {
  mountApp(root);
  void boot(sessionFromHash());
  window.addEventListener("hashchange", () => void boot(sessionFromHash()));
}
