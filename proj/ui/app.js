// Thin client: every control maps to one protocol command; the server owns all state.
// Raw sensor values are only drawn when the server includes them (invasive sessions).
const $ = (id) => document.getElementById(id);
const ws = new WebSocket(`ws://${location.host}/`);
const history = [];
const HISTORY = 600;

function log(line) {
  const el = $("log");
  el.textContent = (line + "\n" + el.textContent).slice(0, 4000);
}

function command(name) {
  const msg = { cmd: name };
  if (name === "set_frequency") msg.hz = Number($("hz").value);
  if (name === "set_amplitude") msg.level = Number($("level").value);
  if (name === "set_bracket") { msg.f1 = Number($("f1").value); msg.f2 = Number($("f2").value); }
  if (name === "set_target") msg.dir = $("dir").value;
  return msg;
}

document.querySelectorAll("button[data-cmd]").forEach((b) => {
  b.addEventListener("click", () => ws.send(JSON.stringify(command(b.dataset.cmd))));
});

function draw() {
  const c = $("plot"), g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  if (history.length < 2) return;
  const peak = Math.max(1e-9, ...history.map((v) => Math.abs(v)));
  g.beginPath();
  history.forEach((v, i) => {
    const x = (i / (HISTORY - 1)) * c.width;
    const y = c.height / 2 - (v / peak) * (c.height / 2 - 4);
    i ? g.lineTo(x, y) : g.moveTo(x, y);
  });
  g.stroke();
}

ws.onopen = () => { $("status").textContent = "connected"; };
ws.onclose = () => { $("status").textContent = "disconnected"; };
ws.onmessage = (ev) => {
  const f = JSON.parse(ev.data);
  if (f.error) { log("error: " + f.error); return; }
  if (f.hello) {
    const h = f.hello;
    $("status").textContent = `${h.role} / ${h.scenario} / ${h.mode}`;
    return;
  }
  $("t").textContent = f.t.toFixed(2);
  const d = f.drive;
  $("drive").textContent = `${d.frequency_hz.toFixed(1)} Hz x ${d.level} ${d.emitting ? "on" : "off"}`;
  if (!$("hz").value) { $("hz").value = d.frequency_hz; $("f1").value = d.f1_hz; $("f2").value = d.f2_hz; }
  $("obs").textContent = `${f.obs.dir} (class ${f.obs.mag_class})`;
  $("theta").textContent = f.pose.theta.toFixed(3);
  $("sensor-row").hidden = !f.sensor;
  if (f.sensor) $("omega").textContent = f.sensor.omega.toFixed(4);
  for (const e of f.events) log(`${e.t.toFixed(2)} ${e.kind}`);
  history.push(f.pose.theta);
  if (history.length > HISTORY) history.shift();
  draw();
};
