import { ApiClient } from "./api.js";
import { ConsoleApp } from "./app.js";
const base = window.ONCODSS_API_BASE ?? "";
const root = document.getElementById("app");
if (root) {
    const app = new ConsoleApp(document, root, new ApiClient(base));
    void app.init();
}
