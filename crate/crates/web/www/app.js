import init, { types, synth, elimfix } from "./pkg/ocltl_web.js";

const $ = (id) => document.getElementById(id);

function fail(target, e) {
  target.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(e);
  target.appendChild(p);
}

function listTypes() {
  try {
    const r = JSON.parse(types($("ty-structure").value, Number($("ty-arity").value)));
    $("ty-out").textContent = `${r.count} types of arity ${r.arity} over ${r.structure}\n\n${r.types.join("\n")}`;
  } catch (e) {
    fail($("ty-out"), e);
  }
}

function runSynth() {
  const out = $("sy-out");
  try {
    const r = JSON.parse(synth($("sy-spec").value, $("sy-mode").value, $("sy-inputs").value, Number($("sy-steps").value)));
    out.innerHTML = "";
    const head = document.createElement("p");
    const size = r.states === undefined ? "" : ` (${r.states} states)`;
    head.textContent = `${r.verdict}${size}; ${r.props.inputs} input and ${r.props.outputs} output propositions`;
    if (r.reason) head.textContent += `: ${r.reason}`;
    out.appendChild(head);
    if (!r.run) return;
    const table = document.createElement("table");
    const cols = ["t", "inputs", "state", "sigma", "tau", "outputs"];
    const tr = table.insertRow();
    for (const c of cols) {
      const th = document.createElement("th");
      th.textContent = c;
      tr.appendChild(th);
    }
    for (const row of r.run) {
      const line = table.insertRow();
      for (const c of cols) line.insertCell().textContent = row[c];
    }
    out.appendChild(table);
    const verdict = document.createElement("p");
    verdict.textContent = r.trace;
    out.appendChild(verdict);
  } catch (e) {
    fail(out, e);
  }
}

function runElimfix() {
  try {
    const r = JSON.parse(elimfix($("fx-formula").value, $("fx-structure").value, $("fx-constants").value));
    const lines = [r.formula, ""];
    for (const t of r.traces) {
      const fixed = t.fixed_at === null ? "no fixed point" : `fixed at iterate ${t.fixed_at}`;
      lines.push(`${t.op} ${t.rel}: iterate sizes ${t.sizes.join(", ")}; ${fixed}`);
    }
    for (const w of r.warnings) lines.push(`warning: ${w}`);
    $("fx-out").textContent = lines.join("\n");
  } catch (e) {
    fail($("fx-out"), e);
  }
}

init().then(() => {
  $("status").textContent = "Ready.";
  $("ty-run").onclick = listTypes;
  $("sy-run").onclick = runSynth;
  $("fx-run").onclick = runElimfix;
});
