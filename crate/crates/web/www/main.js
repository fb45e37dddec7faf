import init, { region_grid, scalar_profile, k_bound, constants_table } from "./pkg/cg_lab_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const CLOSED = 1, EXACT = 2, EMPIRICAL = 4;

function guard(f) {
  return () => {
    $("error").textContent = "";
    try {
      f();
    } catch (e) {
      $("error").textContent = String(e.message ?? e);
    }
  };
}

function drawRegion() {
  const n = num("rn"), c0 = num("rc0"), c1 = num("rc1"), k0 = num("rk0"), k1 = num("rk1");
  const cs = 90, ks = 60;
  const flags = region_grid(n, c0, c1, cs, k0, k1, ks, num("rs"), 0);
  const cv = $("region"), g = cv.getContext("2d");
  const w = cv.width / cs, h = cv.height / ks;
  for (let i = 0; i < cs; i++) {
    for (let j = 0; j < ks; j++) {
      const f = flags[i * ks + j];
      const closed = (f & CLOSED) !== 0, sampled = (f & EMPIRICAL) !== 0;
      g.fillStyle = closed !== sampled ? "#fc3"
        : closed && (f & EXACT) === 0 ? "#88f"
        : closed ? "#3a7" : "#d44";
      g.fillRect(i * w, cv.height - (j + 1) * h, Math.ceil(w), Math.ceil(h));
    }
  }
  g.fillStyle = "#000";
  g.font = "12px sans-serif";
  g.fillText(`c = ${c0}`, 4, cv.height - 4);
  g.fillText(`c = ${c1}`, cv.width - 50, cv.height - 4);
  g.fillText(`k = ${k1}`, 4, 14);
}

function drawProfile() {
  const n = num("pn"), c = num("pc"), frac = num("pf");
  const kb = k_bound(n, c);
  const k = Number.isFinite(kb) ? frac * kb : frac;
  $("pfv").textContent = Number.isFinite(kb) ? `k = ${k.toFixed(4)}` : `K undefined, k = ${k}`;
  const steps = 300, zmax = 30;
  const ys = scalar_profile(n, c, k, zmax, steps, $("palong").checked);
  const cv = $("profile"), g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  let lo = Math.min(0, ...ys), hi = Math.max(0, ...ys);
  if (hi - lo < 1e-9) hi = lo + 1;
  const X = (i) => (i / (steps - 1)) * (cv.width - 20) + 10;
  const Y = (v) => cv.height - 10 - ((v - lo) / (hi - lo)) * (cv.height - 20);
  g.strokeStyle = "#999";
  g.beginPath();
  g.moveTo(0, Y(0));
  g.lineTo(cv.width, Y(0));
  g.stroke();
  g.strokeStyle = "#2255cc";
  g.lineWidth = 2;
  g.beginPath();
  ys.forEach((v, i) => (i === 0 ? g.moveTo(X(i), Y(v)) : g.lineTo(X(i), Y(v))));
  g.stroke();
  g.fillStyle = "#000";
  g.fillText(`min ${Math.min(...ys).toPrecision(6)}   |·| up to ${zmax}`, 14, 16);
}

function drawConstants() {
  const n0 = num("cn0"), n1 = num("cn1"), c = num("cc");
  const rows = constants_table(n0, n1, c);
  const head = ["n", "r", "a", "b", "d", "C_n", `K(n, ${c})`];
  let html = "<tr>" + head.map((h) => `<th>${h}</th>`).join("") + "</tr>";
  for (let i = 0; i < rows.length; i += 7) {
    const cells = Array.from(rows.slice(i, i + 7), (v, j) =>
      j < 5 ? String(v) : Number.isFinite(v) ? v.toFixed(4) : "");
    html += "<tr>" + cells.map((v) => `<td>${v}</td>`).join("") + "</tr>";
  }
  $("constants").innerHTML = html;
}

await init();
$("rgo").addEventListener("click", guard(drawRegion));
for (const id of ["pn", "pc", "pf", "palong"]) $(id).addEventListener("input", guard(drawProfile));
for (const id of ["cn0", "cn1", "cc"]) $(id).addEventListener("input", guard(drawConstants));
guard(drawRegion)();
guard(drawProfile)();
guard(drawConstants)();
