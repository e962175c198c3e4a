import { mount } from "./repl.js";

// Same-origin /api/v1 by default; override with ?api=http://host:port/api/v1
// when the static files and the service run on different ports.
const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "/api/v1";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app element");
}
mount(document, root, apiBase);
