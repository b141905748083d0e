import { ApiClient } from "./api.js";
import { createApp } from "./app.js";

declare global {
  interface Window {
    SEGIMT_BASE_URL?: string;
  }
}

const baseUrl =
  window.SEGIMT_BASE_URL ??
  document.querySelector<HTMLMetaElement>('meta[name="segimt-base-url"]')?.content ??
  "http://127.0.0.1:8000";

const root = document.getElementById("app");
if (root) {
  createApp(root, new ApiClient(baseUrl));
}
