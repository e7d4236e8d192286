import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["tests/**/*.spec.ts"],
    testTimeout: 120_000,
    hookTimeout: 60_000,
    // The e2e file owns a server subprocess; keep files sequential.
    fileParallelism: false,
  },
});
