// Display formatting only. Values always come straight from the server.

export function formatMinutes(minutes: number): string {
  return Number.isInteger(minutes) ? String(minutes) : minutes.toFixed(1);
}

export function formatProbability(probability: number): string {
  return probability.toFixed(4);
}

export function formatZ(z: number): string {
  return z.toFixed(2);
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
