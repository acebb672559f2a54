import { initApp } from "./app.js";

initApp(document, { storage: window.sessionStorage });
