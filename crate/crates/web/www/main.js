import init, { analyze, betti, classify } from "./pkg/tpsurf_web.js";

const presets = {
  example: `bidegree: 2 2
p0: t^2*u^2 + s^2*u*v
p1: t^2*u*v + s^2*v^2
p2: t^2*v^2
p3: s^2*u^2
`,
  generic: `bidegree: 2 2
p0: s^2*u^2 + t^2*u*v
p1: s^2*u*v + t^2*v^2
p2: 3*s^2*u^2 - s*t*u*v + 2*t^2*u^2 + 5*s^2*v^2 - t^2*v^2 + s*t*u^2
p3: -2*s^2*u*v + 7*s*t*v^2 + t^2*u^2 - 4*s*t*u^2 + s^2*v^2 + 3*t^2*u*v
`,
  segre: `bidegree: 1 1
p0: s*u
p1: s*v
p2: t*u
p3: t*v
`,
};

const $ = (id) => document.getElementById(id);
const show = (json) => {
  $("out").textContent = JSON.stringify(JSON.parse(json), null, 2);
};

await init();

$("preset").addEventListener("change", (e) => {
  $("input").value = presets[e.target.value];
});
$("input").value = presets.example;

$("analyze").addEventListener("click", () => {
  show(analyze($("input").value, Number($("seed").value) >>> 0));
});
$("betti").addEventListener("click", () => {
  show(betti($("input").value, Number($("box-m").value), Number($("box-n").value)));
});
$("classify").addEventListener("click", () => {
  show(classify($("p21").value));
});

$("out").textContent = "ready";
