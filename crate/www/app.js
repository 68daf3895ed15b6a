import init, { presetNames, preset, check, simulate } from "./pkg/flexsim_wasm.js";

const MAX_FRAMES = 120;
const $ = (id) => document.getElementById(id);
let animation = null;

function errorText(e) {
  const raw = e && e.message ? e.message : String(e);
  try {
    const parsed = JSON.parse(raw);
    const paths = (parsed.errors || []).map((f) => `${f.path}: ${f.message}`);
    return paths.length ? paths.join("\n") : parsed.message;
  } catch {
    return raw;
  }
}

function banner(kind, text) {
  const el = $("banner");
  el.className = `banner ${kind}`;
  el.textContent = text;
}

function range(rows) {
  let lo = Infinity;
  let hi = -Infinity;
  for (const row of rows) {
    for (const v of row) {
      if (Number.isFinite(v)) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
    }
  }
  if (!(hi > lo)) {
    lo -= 1;
    hi += 1;
  }
  return [lo, hi];
}

// Oblique projection: x to the right, t receding up-right, w vertical.
function drawSurface(canvas, sim) {
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const rows = sim.frames.w;
  if (!rows.length) return;
  const [lo, hi] = range(rows);
  const x0 = sim.x[0];
  const x1 = sim.x[sim.x.length - 1];
  const plotW = width * 0.6;
  const depthX = width * 0.3;
  const depthY = height * 0.35;
  const zScale = height * 0.45;
  const project = (x, r, w) => {
    const u = (x - x0) / (x1 - x0);
    const d = rows.length > 1 ? r / (rows.length - 1) : 0;
    const z = (w - lo) / (hi - lo);
    return [20 + u * plotW + d * depthX, height - 20 - d * depthY - z * zScale];
  };
  ctx.lineWidth = 1;
  for (let r = rows.length - 1; r >= 0; r--) {
    const shade = Math.round(40 + 160 * (r / Math.max(rows.length - 1, 1)));
    ctx.strokeStyle = `rgb(${shade}, ${shade}, 230)`;
    ctx.beginPath();
    rows[r].forEach((w, i) => {
      const [px, py] = project(sim.x[i], r, Number.isFinite(w) ? w : hi);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.stroke();
  }
  ctx.fillStyle = "#333";
  ctx.font = "12px sans-serif";
  ctx.fillText(`w in [${lo.toPrecision(3)}, ${hi.toPrecision(3)}]`, 10, 16);
  ctx.fillText(`t: 0 .. ${sim.frames.t[sim.frames.t.length - 1].toPrecision(3)}`, 10, 32);
}

function drawLine(canvas, xs, ys, yRange, color) {
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  const [lo, hi] = yRange;
  const xa = xs[0];
  const xb = xs[xs.length - 1];
  const px = (x) => 30 + ((x - xa) / (xb - xa || 1)) * (width - 40);
  const py = (y) => height - 15 - ((y - lo) / (hi - lo)) * (height - 30);
  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  ctx.moveTo(px(xa), py(0));
  ctx.lineTo(px(xb), py(0));
  ctx.stroke();
  ctx.strokeStyle = color;
  ctx.beginPath();
  ys.forEach((y, i) => {
    const v = Math.min(Math.max(y, lo), hi);
    if (i === 0) ctx.moveTo(px(xs[i]), py(v));
    else ctx.lineTo(px(xs[i]), py(v));
  });
  ctx.stroke();
}

function drawTip(canvas, sim) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  drawLine(canvas, sim.tip.t, sim.tip.w, range([sim.tip.w]), "#c0392b");
}

function animate(canvas, sim) {
  if (animation) cancelAnimationFrame(animation);
  const yRange = range(sim.frames.w);
  const ctx = canvas.getContext("2d");
  let frame = 0;
  let last = 0;
  const step = (now) => {
    if (now - last > 60) {
      last = now;
      ctx.clearRect(0, 0, canvas.width, canvas.height);
      drawLine(canvas, sim.x, sim.frames.w[frame], yRange, "#2c3e91");
      if (sim.frames.phi) drawLine(canvas, sim.x, sim.frames.phi[frame], yRange, "#27ae60");
      ctx.fillStyle = "#333";
      ctx.fillText(`t = ${sim.frames.t[frame].toPrecision(4)}`, 36, 16);
      frame = (frame + 1) % sim.frames.w.length;
    }
    animation = requestAnimationFrame(step);
  };
  animation = requestAnimationFrame(step);
}

function loadPreset(name) {
  const doc = JSON.parse(preset(name));
  $("scenario").value = JSON.stringify(doc, null, 2);
  const gains = doc.controller && doc.controller.pd_gains;
  for (const key of ["k2", "k4"]) {
    $(`gain-${key}`).disabled = !gains;
    $(`gain-${key}`).value = gains ? gains[key] : "";
  }
}

function currentScenario() {
  const doc = JSON.parse($("scenario").value);
  const gains = doc.controller && doc.controller.pd_gains;
  if (gains) {
    for (const key of ["k2", "k4"]) {
      const v = parseFloat($(`gain-${key}`).value);
      if (Number.isFinite(v)) gains[key] = v;
    }
    $("scenario").value = JSON.stringify(doc, null, 2);
  }
  return JSON.stringify(doc);
}

function describe(report) {
  const rel = report.predicted_stable ? "<=" : ">";
  return `${report.criterion_name}: ${report.lhs_value.toPrecision(4)} ${rel} ${report.threshold} ` +
    `(${report.predicted_stable ? "predicted stable" : "predicted unstable"})`;
}

function onCheck() {
  try {
    const report = JSON.parse(check(currentScenario()));
    $("report").textContent = describe(report);
  } catch (e) {
    banner("error", errorText(e));
  }
}

function onRun() {
  try {
    const sim = JSON.parse(simulate(currentScenario(), MAX_FRAMES));
    if (sim.verdict.diverged) {
      banner("diverged", `Diverged at step ${sim.verdict.first_bad_step} (peak ${sim.verdict.peak_magnitude.toPrecision(3)})`);
    } else {
      banner("stable", `Stable: ${sim.steps_completed} steps, final-10% mean |w_tip| = ${sim.tip_tail_mean_abs.toPrecision(3)}`);
    }
    $("report").textContent = `${describe(sim.a_priori)}\nmodel=${sim.model} controller=${sim.controller} tip_final=${sim.tip_final.toPrecision(4)}`;
    drawSurface($("surface"), sim);
    drawTip($("tip"), sim);
    animate($("profile"), sim);
  } catch (e) {
    banner("error", errorText(e));
  }
}

function onCompare() {
  for (const side of ["left", "right"]) {
    const name = $(side).value;
    const sim = JSON.parse(simulate(preset(name), MAX_FRAMES));
    drawSurface($(`${side}-surface`), sim);
    const verdict = sim.verdict.diverged ? `diverged at step ${sim.verdict.first_bad_step}` : "stable";
    $(`${side}-caption`).textContent = `${name}: ${verdict}, tail mean |w_tip| ${sim.tip_tail_mean_abs.toPrecision(3)}`;
  }
}

async function main() {
  await init();
  const names = JSON.parse(presetNames());
  for (const id of ["preset", "left", "right"]) {
    for (const name of names) $(id).add(new Option(name, name));
  }
  $("preset").value = "timoshenko_pd_stable";
  $("left").value = "string_no_control";
  $("right").value = "string_exact_model";
  loadPreset($("preset").value);
  $("preset").addEventListener("change", (e) => loadPreset(e.target.value));
  $("check").addEventListener("click", onCheck);
  $("run").addEventListener("click", onRun);
  $("compare").addEventListener("click", onCompare);
}

main();
