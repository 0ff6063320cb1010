import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    testTimeout: 30_000,
    hookTimeout: 30_000,
    // the integration suite drives one engine process; keep files serial
    fileParallelism: false,
  },
});
