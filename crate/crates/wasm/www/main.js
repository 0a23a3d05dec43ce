import init, { radial_profile, moduli_curves, escape_curve } from "./pkg/cocycle_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

const $ = (id) => document.getElementById(id);

function plot(canvas, series, opts = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = { l: 60, r: 16, t: 14, b: 34 };
  ctx.clearRect(0, 0, w, h);

  const xs = series.flatMap((s) => s.x);
  const ys = series.flatMap((s) => s.y).filter(Number.isFinite);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(0, ...ys), Math.max(...ys)];
  if (y1 === y0) y1 = y0 + 1;
  const sx = (x) => pad.l + ((x - x0) / (x1 - x0)) * (w - pad.l - pad.r);
  const sy = (y) => h - pad.b - ((y - y0) / (y1 - y0)) * (h - pad.t - pad.b);

  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#444";
  ctx.font = "11px system-ui";
  ctx.beginPath();
  ctx.moveTo(pad.l, pad.t);
  ctx.lineTo(pad.l, h - pad.b);
  ctx.lineTo(w - pad.r, h - pad.b);
  ctx.stroke();
  for (let i = 0; i <= 4; i++) {
    const yv = y0 + ((y1 - y0) * i) / 4;
    const xv = x0 + ((x1 - x0) * i) / 4;
    ctx.fillText(yv.toPrecision(3), 4, sy(yv) + 4);
    ctx.fillText(xv.toPrecision(3), sx(xv) - 12, h - pad.b + 16);
  }
  if (opts.xlabel) ctx.fillText(opts.xlabel, w - pad.r - 40, h - 4);

  series.forEach((s, i) => {
    ctx.strokeStyle = s.color ?? COLORS[i % COLORS.length];
    ctx.setLineDash(s.dash ?? []);
    ctx.lineWidth = s.width ?? 1.5;
    ctx.beginPath();
    s.x.forEach((x, j) => {
      const [px, py] = [sx(x), sy(s.y[j])];
      j === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = ctx.strokeStyle;
    ctx.fillText(s.label, pad.l + 10 + 150 * i, pad.t + 10);
  });
}

function guarded(statusId, fn) {
  return () => {
    const status = $(statusId);
    status.textContent = "working…";
    // let the status repaint before the computation blocks the thread
    setTimeout(() => {
      try {
        const t = performance.now();
        const note = fn();
        status.textContent = `${note}  (${(performance.now() - t).toFixed(0)} ms)`;
      } catch (e) {
        status.textContent = `error: ${e.message ?? e}`;
      }
    }, 10);
  };
}

function runOde() {
  const d = JSON.parse(
    radial_profile($("ode-field").value, +$("ode-n").value, $("ode-forcing").value, +$("ode-rmax").value),
  );
  const [lo, hi] = d.band;
  const flat = (v) => d.r.map(() => v);
  plot($("ode-plot"), [
    { x: d.r, y: d.psi, label: "ψ(r)" },
    { x: d.r, y: flat(lo), label: "band", color: "#888", dash: [4, 4], width: 1 },
    { x: d.r, y: flat(hi), label: "", color: "#888", dash: [4, 4], width: 1 },
  ], { xlabel: "r" });
  const limit = d.predicted_limit == null ? "" : `, predicted limit ${d.predicted_limit.toFixed(6)}`;
  return `m₁ = ${d.m1}, m₂ = ${d.m2}, ψ(r_max) = ${d.psi.at(-1).toFixed(6)}${limit}, band [${lo.toFixed(4)}, ${hi.toFixed(4)}]`;
}

function runModuli() {
  const d = JSON.parse(moduli_curves(+$("mod-p").value, +$("mod-points").value, +$("mod-restarts").value));
  plot($("mod-plot"), [
    { x: d.eps, y: d.delta, label: "δ(ε)" },
    { x: d.tau, y: d.rho, label: "ρ(τ)" },
    { x: d.tau, y: d.rho_from_dual, label: "ρ from dual δ", dash: [5, 3] },
  ], { xlabel: "ε, τ" });
  return `duality residual ${d.residual?.toExponential(2) ?? "n/a"}`;
}

function runWalk() {
  const d = JSON.parse(
    escape_curve(+$("walk-rank").value, +$("walk-steps").value, +$("walk-walks").value, BigInt($("walk-seed").value)),
  );
  plot($("walk-plot"), [
    { x: d.n, y: d.mean, label: "Monte Carlo E|Wₙ|" },
    { x: d.n, y: d.exact, label: "exact chain", dash: [5, 3] },
    { x: d.n, y: d.n.map((n) => d.limit * n), label: "((k−1)/k)·n", color: "#888", width: 1 },
  ], { xlabel: "n" });
  return `escape rate ${d.rate.toFixed(4)} ± ${d.half_width.toFixed(4)} (limit ${d.limit.toFixed(4)})`;
}

await init();
$("ode-run").onclick = guarded("ode-status", runOde);
$("mod-run").onclick = guarded("mod-status", runModuli);
$("walk-run").onclick = guarded("walk-status", runWalk);
$("ode-run").click();
