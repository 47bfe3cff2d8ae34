import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    // the e2e spec boots the real backend; give it room
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
