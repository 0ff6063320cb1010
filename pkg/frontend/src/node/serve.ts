/**
 * Cockpit bridge: serves the static UI and relays the gateway's TCP
 * NDJSON stream to browsers, which cannot open raw sockets.
 *
 *   GET  /stream  -> chunked NDJSON, one gateway connection per request
 *   POST /frames  -> NDJSON input-frame lines forwarded to the gateway
 *
 * The bridge copies lines verbatim in both directions; all protocol
 * authority stays in the engine.
 */

import * as fs from "node:fs";
import * as http from "node:http";
import * as net from "node:net";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

const here = path.dirname(fileURLToPath(import.meta.url));
const webRoot = path.resolve(here, "..", "..", "web");
const distRoot = path.resolve(here, "..", "..", "dist");

function arg(name: string, fallback: string): string {
  const i = process.argv.indexOf(name);
  return i >= 0 && process.argv[i + 1] ? (process.argv[i + 1] as string) : fallback;
}

const [gwHost, gwPort] = (() => {
  const raw = arg("--gateway", "127.0.0.1:47701");
  const at = raw.lastIndexOf(":");
  return [raw.slice(0, at), Number(raw.slice(at + 1))] as const;
})();
const httpPort = Number(arg("--http", "8787"));

const MIME: Record<string, string> = {
  ".html": "text/html; charset=utf-8",
  ".js": "text/javascript; charset=utf-8",
  ".map": "application/json",
  ".css": "text/css",
};

function serveStatic(res: http.ServerResponse, file: string): void {
  fs.readFile(file, (err, data) => {
    if (err) {
      res.writeHead(404).end("not found");
      return;
    }
    res.writeHead(200, { "content-type": MIME[path.extname(file)] ?? "application/octet-stream" });
    res.end(data);
  });
}

// One shared upstream connection for operator input, redialed lazily.
let inputSock: net.Socket | null = null;
function inputConnection(): net.Socket | null {
  if (inputSock && !inputSock.destroyed) return inputSock;
  inputSock = net.createConnection({ host: gwHost, port: gwPort });
  inputSock.on("error", () => {});
  inputSock.on("close", () => {
    inputSock = null;
  });
  inputSock.resume(); // discard the state lines echoed to this connection
  return inputSock;
}

const server = http.createServer((req, res) => {
  const url = (req.url ?? "/").split("?")[0] as string;

  if (req.method === "GET" && url === "/stream") {
    const upstream = net.createConnection({ host: gwHost, port: gwPort });
    res.writeHead(200, {
      "content-type": "application/x-ndjson",
      "cache-control": "no-store",
    });
    upstream.on("data", (chunk) => res.write(chunk));
    upstream.on("error", () => {});
    upstream.on("close", () => res.end());
    req.on("close", () => upstream.destroy());
    return;
  }

  if (req.method === "POST" && url === "/frames") {
    const sock = inputConnection();
    if (!sock) {
      res.writeHead(503).end();
      return;
    }
    req.on("data", (chunk) => sock.write(chunk));
    req.on("end", () => res.writeHead(204).end());
    return;
  }

  if (req.method === "GET") {
    if (url === "/" || url === "/index.html") {
      serveStatic(res, path.join(webRoot, "index.html"));
      return;
    }
    if (url.startsWith("/dist/")) {
      const file = path.normalize(path.join(distRoot, url.slice("/dist/".length)));
      if (file.startsWith(distRoot)) {
        serveStatic(res, file);
        return;
      }
    }
  }
  res.writeHead(404).end("not found");
});

server.listen(httpPort, "127.0.0.1", () => {
  console.log(`cockpit on http://127.0.0.1:${httpPort} -> gateway ${gwHost}:${gwPort}`);
});
