import init, { complexFromTheta, chambersAtRay, sliceLabels } from "./pkg/hyperpolygon_demo.js";

const $ = (id) => document.getElementById(id);
const ints = (text) => Int32Array.from(text.split(",").map((s) => parseInt(s.trim(), 10)));

function show(id, f) {
  try {
    $(id).textContent = f();
  } catch (e) {
    $(id).textContent = "error: " + (e.message ?? e);
  }
}

function colour(label) {
  if (label === 0) return [255, 255, 255];
  const h = (label * 137.508) % 360;
  const s = 0.55, l = 0.6;
  const k = (n) => (n + h / 30) % 12;
  const a = s * Math.min(l, 1 - l);
  const f = (n) => l - a * Math.max(-1, Math.min(k(n) - 3, 9 - k(n), 1));
  return [f(0), f(8), f(4)].map((x) => Math.round(x * 255));
}

let slice = null;

function render() {
  const canvas = $("slice");
  const { width, height } = canvas;
  const base = ints($("base").value), u = ints($("u").value), v = ints($("v").value);
  const labels = sliceLabels(width, height, base, u, v);
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(width, height);
  let chambers = 0;
  labels.forEach((l, i) => {
    chambers = Math.max(chambers, l);
    const [r, g, b] = colour(l);
    img.data.set([r, g, b, 255], 4 * i);
  });
  ctx.putImageData(img, 0, 0);
  slice = { width, height, base, u, v };
  return `${chambers} chambers meet this slice`;
}

function thetaAt(x, y) {
  const { width: w, height: h, base, u, v } = slice;
  const s = 2 * x - (w - 1), t = h - 1 - 2 * y;
  return Array.from(base, (b, k) => w * h * b + s * h * u[k] + t * w * v[k]).join(",");
}

await init();

$("theta-go").onclick = () => show("theta-out", () => JSON.stringify(JSON.parse(complexFromTheta($("theta").value)), null, 1));
$("ray-go").onclick = () => show("ray-out", () => `${chambersAtRay(parseInt($("ray-n").value, 10), $("ray").value)} chambers`);
$("slice-go").onclick = () => show("slice-out", render);
$("slice").onmousemove = (e) => {
  if (!slice) return;
  const r = e.target.getBoundingClientRect();
  const x = Math.floor(e.clientX - r.left), y = Math.floor(e.clientY - r.top);
  const theta = thetaAt(x, y);
  show("theta-out", () => `θ = ${theta}\n` + JSON.stringify(JSON.parse(complexFromTheta(theta)).maximal_faces));
};

show("slice-out", render);
