/** Raw TCP dial for the gateway's stream endpoint (Node only). */

import * as net from "node:net";
import { Dial } from "../ndjson.js";

export function tcpDial(host: string, port: number): Dial {
  return (handlers) => {
    const sock = net.createConnection({ host, port });
    sock.setEncoding("utf8");
    sock.setNoDelay(true);
    sock.on("connect", () => handlers.onUp());
    sock.on("data", (chunk) => handlers.onData(chunk as unknown as string));
    sock.on("error", () => {
      /* 'close' always follows */
    });
    sock.on("close", () => handlers.onDown());
    return {
      send: (data: string) => {
        sock.write(data);
      },
      close: () => {
        sock.destroy();
      },
    };
  };
}
