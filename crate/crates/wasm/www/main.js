import init, { disc_curves, family_disc, fatou_probe } from "./pkg/holodisc_wasm.js";

// Layout of the curve arrays returned by the module.
const LEVELS = 5, SAMPLES = 96, SPOKES = 12;
const CIRCLE = SAMPLES + 1, SPOKE = SAMPLES / 2 + 1;

const $ = (id) => document.getElementById(id);

function view(canvas, xs, ys, pad = 0.1) {
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const span = Math.max(x1 - x0, y1 - y0) * (1 + 2 * pad) || 1;
  const cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
  const s = canvas.width / span;
  return {
    x: (x) => canvas.width / 2 + (x - cx) * s,
    y: (y) => canvas.height / 2 - (y - cy) * s,
  };
}

function drawCurves(canvas, data, axisX) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const n = LEVELS * CIRCLE + SPOKES * SPOKE;
  const xs = [], ys = [];
  for (let i = 0; i < n; i++) { xs.push(data[2 * i]); ys.push(data[2 * i + 1]); }
  if (axisX !== undefined) xs.push(axisX);
  const v = view(canvas, xs, ys);
  if (axisX !== undefined) {
    ctx.strokeStyle = "#c33";
    ctx.beginPath();
    ctx.moveTo(v.x(axisX), 0);
    ctx.lineTo(v.x(axisX), canvas.height);
    ctx.stroke();
  }
  const path = (start, len, colour) => {
    ctx.strokeStyle = colour;
    ctx.beginPath();
    for (let k = 0; k < len; k++) {
      const px = v.x(xs[start + k]), py = v.y(ys[start + k]);
      k ? ctx.lineTo(px, py) : ctx.moveTo(px, py);
    }
    ctx.stroke();
  };
  for (let r = 0; r < LEVELS; r++) path(r * CIRCLE, CIRCLE, r === LEVELS - 1 ? "#000" : "#36c");
  for (let s = 0; s < SPOKES; s++) path(LEVELS * CIRCLE + s * SPOKE, SPOKE, "#9ab");
}

function bind(ids, update) {
  for (const id of ids) $(id).addEventListener("input", update);
  update();
}

function discPanel() {
  bind(["disc-a", "disc-linear"], () => {
    const a = parseFloat($("disc-a").value);
    $("disc-a-out").textContent = a.toFixed(2);
    try {
      const d = disc_curves(a, $("disc-linear").checked);
      drawCurves($("disc-canvas"), d);
      $("disc-info").textContent = `Picard iterations: ${d[d.length - 1]}`;
    } catch (e) {
      $("disc-info").textContent = String(e);
    }
  });
}

function familyPanel() {
  bind(["fam-eps", "fam-c", "fam-t"], () => {
    const eps = parseFloat($("fam-eps").value), c = parseFloat($("fam-c").value), t = parseFloat($("fam-t").value);
    $("fam-eps-out").textContent = eps.toFixed(3);
    $("fam-c-out").textContent = c.toFixed(2);
    $("fam-t-out").textContent = t.toFixed(2);
    try {
      const d = family_disc(eps, c, t);
      drawCurves($("fam-canvas"), d, 0);
      $("fam-info").textContent = `gluing residual: ${d[d.length - 1].toExponential(2)}`;
    } catch (e) {
      $("fam-info").textContent = String(e);
    }
  });
}

function fatouPanel() {
  const canvas = $("fatou-canvas");
  const ctx = canvas.getContext("2d");
  const frame = () => {
    ctx.strokeStyle = "#c33";
    ctx.beginPath();
    ctx.moveTo(canvas.width / 2, 0);
    ctx.lineTo(canvas.width / 2, canvas.height);
    ctx.stroke();
  };
  frame();
  const names = ["NONTANGENTIAL", "DIRECTIONAL", "NONE"];
  const colours = ["#2a2", "#e90", "#c22"];
  canvas.addEventListener("click", (ev) => {
    const rect = canvas.getBoundingClientRect();
    const y1 = ((ev.clientX - rect.left) / canvas.width) * 2 - 1;
    const y2 = 1 - ((ev.clientY - rect.top) / canvas.height) * 2;
    // Clicks within two pixels of the slice land exactly on it.
    const snapped = Math.abs(ev.clientX - rect.left - canvas.width / 2) <= 2 ? 0 : y1;
    const r = fatou_probe(snapped, y2, parseInt($("fatou-dirs").value, 10) || 16);
    ctx.fillStyle = colours[r[0]];
    ctx.beginPath();
    ctx.arc(ev.clientX - rect.left, ev.clientY - rect.top, 3, 0, 2 * Math.PI);
    ctx.fill();
    const fmt = (re, im) => (Number.isNaN(re) ? "—" : `${re.toFixed(6)} ${im >= 0 ? "+" : "−"} ${Math.abs(im).toFixed(6)}i`);
    $("fatou-info").textContent =
      `y = (${snapped.toFixed(3)}, ${y2.toFixed(3)})\n` +
      `verdict: ${names[r[0]]}\n` +
      `limit:   ${fmt(r[1], r[2])}\n` +
      `closed:  ${fmt(r[3], r[4])}\n` +
      `error bar: ${r[5].toExponential(2)}`;
  });
}

await init();
discPanel();
familyPanel();
fatouPanel();
