/**
 * Concept graph rendering: a small force-directed layout plus an SVG
 * painter. Layout is presentation only; nodes and edges always mirror
 * GET /graph exactly. Implied edges draw dashed, model-contributed
 * concepts get a distinct outline, clusters tint the fill.
 */
import type { ApiGraph } from "./types.js";

export interface GraphNodeVM {
  id: string;
  label: string;
  origin: string;
  cluster: string | null;
  x: number;
  y: number;
}

export interface GraphEdgeVM {
  source: string;
  target: string;
  kind: string;
  explicitness: "explicit" | "implied";
}

export interface GraphViewModel {
  nodes: GraphNodeVM[];
  edges: GraphEdgeVM[];
  selected: string | null;
}

const CLUSTER_FILLS: Record<string, string> = {
  blue: "#cfe3f7",
  green: "#d3eed6",
  yellow: "#f7eec2",
};

export function toGraphModel(graph: ApiGraph, width = 900, height = 600): GraphViewModel {
  // Seed positions on a circle in concept order so runs are repeatable.
  const n = Math.max(graph.concepts.length, 1);
  const radius = Math.min(width, height) * 0.38;
  const nodes = graph.concepts.map((concept, i) => ({
    id: concept.id,
    label: concept.label,
    origin: concept.origin,
    cluster: concept.cluster,
    x: width / 2 + radius * Math.cos((2 * Math.PI * i) / n),
    y: height / 2 + radius * Math.sin((2 * Math.PI * i) / n),
  }));
  const edges = graph.relationships.map((rel) => ({
    source: rel.source,
    target: rel.target,
    kind: rel.kind,
    explicitness: rel.explicitness,
  }));
  return { nodes, edges, selected: null };
}

/**
 * Relax node positions in place: spring forces along edges, pairwise
 * repulsion, and a weak pull to the canvas center. Deterministic, no
 * randomness anywhere, so two renders of one graph agree.
 */
export function runLayout(
  model: GraphViewModel,
  width = 900,
  height = 600,
  iterations = 150,
): void {
  const index = new Map(model.nodes.map((node, i) => [node.id, i]));
  const count = model.nodes.length;
  if (count < 2) return;
  const springLength = Math.min(width, height) / Math.max(3, Math.sqrt(count));
  for (let step = 0; step < iterations; step++) {
    const cool = 1 - step / iterations;
    const fx = new Array<number>(count).fill(0);
    const fy = new Array<number>(count).fill(0);
    for (let i = 0; i < count; i++) {
      for (let j = i + 1; j < count; j++) {
        const a = model.nodes[i];
        const b = model.nodes[j];
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let dist2 = dx * dx + dy * dy;
        if (dist2 < 1e-6) {
          // deterministic nudge for coincident nodes
          dx = 0.1 * (i - j);
          dy = 0.1;
          dist2 = dx * dx + dy * dy;
        }
        const push = (springLength * springLength) / dist2;
        fx[i] += dx * push;
        fy[i] += dy * push;
        fx[j] -= dx * push;
        fy[j] -= dy * push;
      }
    }
    for (const edge of model.edges) {
      const i = index.get(edge.source);
      const j = index.get(edge.target);
      if (i === undefined || j === undefined) continue;
      const a = model.nodes[i];
      const b = model.nodes[j];
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.sqrt(dx * dx + dy * dy) || 1;
      const pull = (dist - springLength) / dist / 6;
      fx[i] += dx * pull;
      fy[i] += dy * pull;
      fx[j] -= dx * pull;
      fy[j] -= dy * pull;
    }
    for (let i = 0; i < count; i++) {
      const node = model.nodes[i];
      fx[i] += (width / 2 - node.x) * 0.01;
      fy[i] += (height / 2 - node.y) * 0.01;
      node.x += Math.max(-12, Math.min(12, fx[i] * cool));
      node.y += Math.max(-12, Math.min(12, fy[i] * cool));
      node.x = Math.max(20, Math.min(width - 20, node.x));
      node.y = Math.max(20, Math.min(height - 20, node.y));
    }
  }
}

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderGraph(
  container: HTMLElement,
  model: GraphViewModel,
  onSelect: (id: string | null) => void = () => {},
  width = 900,
  height = 600,
): SVGSVGElement {
  container.textContent = "";
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "concept-graph");

  const byId = new Map(model.nodes.map((node) => [node.id, node]));
  for (const edge of model.edges) {
    const a = byId.get(edge.source);
    const b = byId.get(edge.target);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", a.x.toFixed(1));
    line.setAttribute("y1", a.y.toFixed(1));
    line.setAttribute("x2", b.x.toFixed(1));
    line.setAttribute("y2", b.y.toFixed(1));
    line.setAttribute("data-kind", edge.kind);
    line.setAttribute(
      "class",
      edge.explicitness === "implied" ? "edge edge-implied" : "edge",
    );
    if (edge.explicitness === "implied") {
      line.setAttribute("stroke-dasharray", "5,4");
    }
    svg.appendChild(line);
  }

  for (const node of model.nodes) {
    const group = document.createElementNS(SVG_NS, "g");
    const llm = node.origin.startsWith("llm");
    group.setAttribute("class", llm ? "node node-llm" : "node node-author");
    group.setAttribute("data-node-id", node.id);
    if (node.id === model.selected) group.setAttribute("data-selected", "true");

    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", node.x.toFixed(1));
    circle.setAttribute("cy", node.y.toFixed(1));
    circle.setAttribute("r", "14");
    circle.setAttribute(
      "fill",
      node.cluster ? (CLUSTER_FILLS[node.cluster] ?? "#e8e8e8") : "#f2f2f2",
    );
    // outline color is the origin marker; css keys off the class too
    circle.setAttribute("stroke", llm ? "#c0392b" : "#555555");
    circle.setAttribute("stroke-width", llm ? "3" : "1.5");

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", node.x.toFixed(1));
    text.setAttribute("y", (node.y - 18).toFixed(1));
    text.setAttribute("text-anchor", "middle");
    text.textContent = node.label;

    group.append(circle, text);
    group.addEventListener("click", () => {
      model.selected = model.selected === node.id ? null : node.id;
      onSelect(model.selected);
      renderGraph(container, model, onSelect, width, height);
    });
    svg.appendChild(group);
  }

  container.appendChild(svg);
  return svg;
}
