import { App } from "./app.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const app = new App({
  canvas: el<HTMLCanvasElement>("viewport"),
  banner: el("banner"),
  status: el("status"),
  target: el<HTMLSelectElement>("target"),
  palette: el("palette"),
  eventLog: el("events"),
  info: el("info"),
});

el<HTMLButtonElement>("connect").addEventListener("click", () => {
  const url = el<HTMLInputElement>("url").value;
  void app.connect(url);
});

el<HTMLButtonElement>("play").addEventListener("click", async () => {
  const files = el<HTMLInputElement>("tracefile").files;
  if (!files || files.length === 0) return;
  const speed = Number(el<HTMLInputElement>("speed").value) || 1;
  app.startPlayback(await files[0].text(), speed);
});

el<HTMLButtonElement>("virtualhand").addEventListener("click", () => {
  app.startVirtualHand();
});
