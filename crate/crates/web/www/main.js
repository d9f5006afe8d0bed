import init, { gridSvg, profile, optimal2d } from "./pkg/lee_embed_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function drawGrid() {
  $("g-err").textContent = "";
  try {
    $("grid").innerHTML = gridSvg(num("g-k"), $("g-images").value, num("g-extent"), $("g-radii").value);
  } catch (e) {
    $("grid").innerHTML = "";
    $("g-err").textContent = String(e);
  }
}

function showProfile() {
  try {
    const v = JSON.parse(profile(num("p-k"), $("p-images").value));
    const gap = v.gap === null ? "n/a" : v.gap;
    $("p-summary").textContent =
      `pi = ${v.embedding_number}, lower bound f = ${v.f}, gap = ${gap}` + (v.optimal ? " (optimal)" : "");
    $("p-out").textContent = JSON.stringify({ layers: v.layers, covering_radius: v.covering_radius }, null, 2);
  } catch (e) {
    $("p-summary").textContent = "";
    $("p-out").textContent = String(e);
  }
}

let lastOptimal = null;

function findOptimal() {
  try {
    lastOptimal = JSON.parse(optimal2d(num("o-k")));
    $("o-out").textContent = JSON.stringify(lastOptimal, null, 2);
  } catch (e) {
    lastOptimal = null;
    $("o-out").textContent = String(e);
  }
}

function drawOptimal() {
  if (!lastOptimal) findOptimal();
  if (!lastOptimal) return;
  $("g-k").value = $("o-k").value;
  $("g-images").value = lastOptimal.hom.images.join(", ");
  drawGrid();
}

await init();
$("g-go").onclick = drawGrid;
$("p-go").onclick = showProfile;
$("o-go").onclick = findOptimal;
$("o-draw").onclick = drawOptimal;
drawGrid();
showProfile();
findOptimal();
