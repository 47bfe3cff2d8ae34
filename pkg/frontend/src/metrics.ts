/**
 * Metrics panel: histogram, centrality table, coverage lists, and
 * inconsistency cards when the payload carries findings.
 */
import type { ApiMetrics, InconsistencyFinding } from "./types.js";

function section(title: string, className: string): HTMLElement {
  const wrapper = document.createElement("section");
  wrapper.className = className;
  const heading = document.createElement("h3");
  heading.textContent = title;
  wrapper.appendChild(heading);
  return wrapper;
}

function renderHistogram(histogram: Record<string, number>): HTMLElement {
  const wrapper = section("Path lengths", "metrics-histogram");
  const lengths = Object.keys(histogram)
    .map(Number)
    .sort((a, b) => a - b);
  const peak = Math.max(1, ...lengths.map((l) => histogram[String(l)]));
  const chart = document.createElement("div");
  chart.className = "bars";
  for (const length of lengths) {
    const count = histogram[String(length)];
    const bar = document.createElement("div");
    bar.className = "bar";
    bar.dataset.length = String(length);
    bar.dataset.count = String(count);
    bar.style.height = `${Math.round((count / peak) * 100)}%`;
    bar.title = `${count} paths of length ${length}`;
    const tick = document.createElement("span");
    tick.textContent = String(length);
    bar.appendChild(tick);
    chart.appendChild(bar);
  }
  wrapper.appendChild(chart);
  return wrapper;
}

function renderCentrality(rows: { concept: string; degree: number }[]): HTMLElement {
  const wrapper = section("Central concepts", "metrics-centrality");
  const table = document.createElement("table");
  const head = table.insertRow();
  head.insertCell().textContent = "concept";
  head.insertCell().textContent = "degree";
  for (const row of rows.slice(0, 10)) {
    const tr = table.insertRow();
    tr.insertCell().textContent = row.concept;
    tr.insertCell().textContent = String(row.degree);
  }
  wrapper.appendChild(table);
  return wrapper;
}

function renderList(title: string, className: string, items: string[]): HTMLElement {
  const wrapper = section(title, className);
  if (items.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty";
    empty.textContent = "none";
    wrapper.appendChild(empty);
    return wrapper;
  }
  const list = document.createElement("ul");
  for (const item of items) {
    const li = document.createElement("li");
    li.textContent = item;
    list.appendChild(li);
  }
  wrapper.appendChild(list);
  return wrapper;
}

function renderFinding(finding: InconsistencyFinding): HTMLElement {
  const card = document.createElement("article");
  card.className = `finding finding-${finding.severity}`;
  const title = document.createElement("h4");
  title.textContent = `${finding.pair[0]} vs ${finding.pair[1]} (${finding.severity})`;
  card.appendChild(title);
  const list = document.createElement("ul");
  for (const conflict of finding.conflicts) {
    const li = document.createElement("li");
    const left = document.createElement("mark");
    left.className = `polarity-${conflict.source_polarity}`;
    left.textContent = conflict.source_attribute;
    const right = document.createElement("mark");
    right.className = `polarity-${conflict.target_polarity}`;
    right.textContent = conflict.target_attribute;
    li.append(left, document.createTextNode(" against "), right);
    list.appendChild(li);
  }
  card.appendChild(list);
  return card;
}

export function renderMetricsPanel(container: HTMLElement, metrics: ApiMetrics): void {
  container.textContent = "";

  const summary = document.createElement("p");
  summary.className = "metrics-summary";
  summary.dataset.conceptCount = String(metrics.concept_count);
  summary.dataset.pathCount = String(metrics.paths.path_count);
  summary.textContent =
    `${metrics.concept_count} concepts, ${metrics.paths.path_count} paths, ` +
    `max depth ${metrics.paths.max_depth}, breadth ${metrics.paths.breadth}`;
  container.appendChild(summary);

  container.appendChild(renderHistogram(metrics.paths.length_histogram));
  container.appendChild(renderCentrality(metrics.centrality));
  container.appendChild(
    renderList("Isolated concepts", "metrics-isolated", metrics.unconnected.isolated),
  );
  container.appendChild(
    renderList(
      "Implied-only links",
      "metrics-implied",
      metrics.unconnected.implied_only_bridges.map((pair) => pair.join(" / ")),
    ),
  );
  container.appendChild(
    renderList(
      "Unanchored model concepts",
      "metrics-unanchored",
      metrics.unexplored.unanchored_llm,
    ),
  );
  container.appendChild(
    renderList(
      "Author concepts without follow-up",
      "metrics-unexplored",
      metrics.unexplored.author_without_llm,
    ),
  );

  if (metrics.inconsistencies && metrics.inconsistencies.length > 0) {
    const wrapper = section("Inconsistencies", "metrics-inconsistencies");
    for (const finding of metrics.inconsistencies) {
      wrapper.appendChild(renderFinding(finding));
    }
    container.appendChild(wrapper);
  }
}

/** 422 from the metrics endpoint means there is nothing to chart yet. */
export function renderMetricsEmpty(container: HTMLElement, message: string): void {
  container.textContent = "";
  const empty = document.createElement("p");
  empty.className = "metrics-empty";
  empty.textContent = message;
  container.appendChild(empty);
}
