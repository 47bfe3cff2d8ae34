import { describe, expect, it } from "vitest";
import { renderMetricsEmpty, renderMetricsPanel } from "../src/metrics.js";
import type { ApiMetrics } from "../src/types.js";

function baseMetrics(): ApiMetrics {
  return {
    concept_count: 24,
    paths: {
      path_count: 13,
      length_histogram: { "2": 1, "3": 5, "4": 3, "5": 4 },
      max_depth: 5,
      breadth: 6,
      paths: [],
    },
    centrality: [
      { concept: "poetry", degree: 5 },
      { concept: "dance", degree: 4 },
      { concept: "topic", degree: 3 },
    ],
    clusters: { blue: 9, green: 8 },
    unconnected: {
      isolated: ["meter"],
      implied_only_bridges: [["topic", "dance"]],
    },
    unexplored: {
      unanchored_llm: ["swan lake"],
      author_without_llm: ["stanza"],
    },
    idea_flow: { threshold: 0.2, chains: [], flagged: [] },
  };
}

describe("renderMetricsPanel", () => {
  it("charts the length histogram with one bar per length", () => {
    const container = document.createElement("div");
    renderMetricsPanel(container, baseMetrics());
    const bars = container.querySelectorAll(".bars .bar");
    expect(bars).toHaveLength(4);
    const byLength = Object.fromEntries(
      Array.from(bars).map((bar) => [
        (bar as HTMLElement).dataset.length,
        (bar as HTMLElement).dataset.count,
      ]),
    );
    expect(byLength).toEqual({ "2": "1", "3": "5", "4": "3", "5": "4" });
    const tallest = Array.from(bars).find(
      (bar) => (bar as HTMLElement).dataset.length === "3",
    ) as HTMLElement;
    expect(tallest.style.height).toBe("100%");
  });

  it("summarizes concept and path counts as data attributes", () => {
    const container = document.createElement("div");
    renderMetricsPanel(container, baseMetrics());
    const summary = container.querySelector(".metrics-summary") as HTMLElement;
    expect(summary.dataset.conceptCount).toBe("24");
    expect(summary.dataset.pathCount).toBe("13");
  });

  it("tabulates centrality and lists coverage gaps", () => {
    const container = document.createElement("div");
    renderMetricsPanel(container, baseMetrics());
    const rows = container.querySelectorAll(".metrics-centrality table tr");
    expect(rows).toHaveLength(4);
    expect(rows[1].textContent).toContain("poetry");
    expect(container.querySelector(".metrics-isolated ul")!.textContent).toBe("meter");
    expect(container.querySelector(".metrics-implied ul")!.textContent).toBe("topic / dance");
    expect(container.querySelector(".metrics-unanchored ul")!.textContent).toBe("swan lake");
    expect(container.querySelector(".metrics-unexplored ul")!.textContent).toBe("stanza");
  });

  it("shows inconsistency cards with the conflicting attribute pair marked", () => {
    const metrics = baseMetrics();
    metrics.inconsistencies = [
      {
        pair: ["odette", "odile"],
        severity: "strong",
        conflicts: [
          {
            source_attribute: "innocent",
            source_polarity: "positive",
            target_attribute: "deceitful",
            target_polarity: "negative",
          },
        ],
      },
    ];
    const container = document.createElement("div");
    renderMetricsPanel(container, metrics);
    const card = container.querySelector(".metrics-inconsistencies .finding") as HTMLElement;
    expect(card.classList.contains("finding-strong")).toBe(true);
    expect(card.querySelector("h4")!.textContent).toBe("odette vs odile (strong)");
    const marks = card.querySelectorAll("mark");
    expect(marks).toHaveLength(2);
    expect(marks[0].className).toBe("polarity-positive");
    expect(marks[0].textContent).toBe("innocent");
    expect(marks[1].className).toBe("polarity-negative");
    expect(marks[1].textContent).toBe("deceitful");
    expect(card.querySelector("li")!.textContent).toBe("innocent against deceitful");
  });

  it("omits the inconsistency section when the payload has no findings", () => {
    const container = document.createElement("div");
    renderMetricsPanel(container, baseMetrics());
    expect(container.querySelector(".metrics-inconsistencies")).toBeNull();
  });
});

describe("renderMetricsEmpty", () => {
  it("replaces the panel with the empty-state message", () => {
    const container = document.createElement("div");
    renderMetricsPanel(container, baseMetrics());
    renderMetricsEmpty(container, "no annotation for revision 1 yet");
    expect(container.querySelectorAll("*")).toHaveLength(1);
    expect(container.querySelector(".metrics-empty")!.textContent).toBe(
      "no annotation for revision 1 yet",
    );
  });
});
