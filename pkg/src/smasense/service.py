"""Fixed-tick demo loop: plant + estimators + 3-level contact LED.

One authoritative simulation thread owns all state and steps the plant
at the configured tick, runs the pose and contact-force estimators on
the measured signals, classifies the LED, and broadcasts a DemoState
snapshot as one JSON line per tick.  Clients talk to the loop only
through a command queue (set_force / set_setpoint / reset).

The same loop runs headless for tests: a replay script applies
commands at given ticks and every DemoState line goes to a log file,
byte-identical across runs for a fixed seed.

Socket protocol (default port 8090), line-delimited JSON both ways:

  server -> client, every tick:
    {"type": "state", "v": 1, "tick": int, "t_s": float,
     "theta_true_deg": float, "theta_hat_deg": float,
     "f_ext_hat_n": float, "led": "green"|"blue"|"red",
     "temp_c": float, "resistance_ohm": float,
     "setpoint_deg": float, "human_force_n": float}
  server -> client, every 5 s:
    {"type": "heartbeat", "v": 1, "tick": int}
  client -> server:
    {"type": "set_force", "force_n": float >= 0}
    {"type": "set_setpoint", "theta_deg": float in [0, 45]}
    {"type": "reset"}
  server replies {"type": "ack", "cmd": ...} or
    {"type": "error", "message": ...}; lines that are not JSON at all
    drop the connection.

A browser cannot open a raw TCP socket, so the same port also accepts
WebSocket connections (sniffed by the leading "GET " of the HTTP
handshake) carrying the identical JSON lines as text frames.
"""

from __future__ import annotations

import base64
import hashlib
import json
import math
import queue
import socket
import struct
import threading
import time
from dataclasses import dataclass, field

import numpy as np

from . import poly
from .control import BabblerParams, BabblerState, babble_step
from .detector import classify3, LED_NONE, LED_CONTACT, LED_HIGH
from .estimators import SwitchingModel, predict_pose
from .plant import PlantParams, Scenario, initial_state, step

PROTOCOL_VERSION = 1
DEFAULT_PORT = 8090
HEARTBEAT_S = 5.0
T_LO_DEFAULT = 0.1
T_HI_DEFAULT = 0.5
MAX_LINE_BYTES = 4096

LED_COLOR = {LED_NONE: "green", LED_CONTACT: "blue", LED_HIGH: "red"}


@dataclass(frozen=True)
class DemoState:
    tick: int
    t_s: float
    theta_true: float
    theta_hat: float
    f_ext_hat: float
    led: str
    temp_c: float
    resistance_ohm: float
    setpoint: float
    human_force: float

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "type": "state",
                "v": PROTOCOL_VERSION,
                "tick": self.tick,
                "t_s": self.t_s,
                "theta_true_deg": math.degrees(self.theta_true),
                "theta_hat_deg": math.degrees(self.theta_hat),
                "f_ext_hat_n": self.f_ext_hat,
                "led": self.led,
                "temp_c": self.temp_c,
                "resistance_ohm": self.resistance_ohm,
                "setpoint_deg": math.degrees(self.setpoint),
                "human_force_n": self.human_force,
            }
        )


class CommandError(ValueError):
    """A well-formed but invalid command message."""


@dataclass
class DemoLoop:
    """The authoritative simulation; single owner of all mutable state."""

    pose_model: SwitchingModel
    contact_model: poly.PolyModel
    params: PlantParams = field(default_factory=PlantParams)
    babbler: BabblerParams = field(default_factory=BabblerParams)
    seed: int = 0
    setpoint: float = math.radians(25.0)
    t_lo: float = T_LO_DEFAULT
    t_hi: float = T_HI_DEFAULT
    tick_s: float = 0.1

    def __post_init__(self):
        if self.contact_model.var_names != ("R", "T", "theta"):
            raise ValueError('demo contact model must be over ("R", "T", "theta")')
        self.reset()

    def reset(self) -> None:
        self.tick = 0
        self.human_force = 0.0
        self.state = initial_state(self.params)
        self.scenario = Scenario(
            duration=1 << 62,
            setpoint_schedule=((self.setpoint, 1 << 62),),
            seed=self.seed,
            tick=self.tick_s,
        )
        self.bab = BabblerState(self.babbler, [(self.setpoint, 1 << 62)])
        self.rng = np.random.default_rng(self.seed)
        self.theta_meas = 0.0

    def handle_command(self, msg: dict) -> dict:
        """Apply one client command; raises CommandError on bad content."""
        if not isinstance(msg, dict) or "type" not in msg:
            raise CommandError("command must be an object with a 'type' field")
        kind = msg["type"]
        if kind == "set_force":
            try:
                force = float(msg["force_n"])
            except (KeyError, TypeError, ValueError):
                raise CommandError("set_force needs a numeric 'force_n'") from None
            if not force >= 0.0 or not math.isfinite(force):
                raise CommandError("force_n must be finite and >= 0")
            self.human_force = force
        elif kind == "set_setpoint":
            try:
                deg = float(msg["theta_deg"])
            except (KeyError, TypeError, ValueError):
                raise CommandError("set_setpoint needs a numeric 'theta_deg'") from None
            if not 0.0 <= deg <= 45.0:
                raise CommandError("theta_deg must be in [0, 45]")
            self.setpoint = math.radians(deg)
            self.bab.schedule[self.bab.position] = (self.setpoint, 1 << 62)
        elif kind == "reset":
            self.reset()
        else:
            raise CommandError(f"unknown command {kind!r}")
        return {"type": "ack", "cmd": kind}

    def step_once(self) -> DemoState:
        u_nom = babble_step(self.theta_meas, self.bab, self.scenario.tick)
        self.state, frame = step(
            self.state, u_nom, self.scenario, self.params, self.rng, human_force=self.human_force
        )
        self.theta_meas = frame.theta_rad
        f_hat = float(
            poly.predict_many(
                self.contact_model, np.array([[frame.r_ohm, frame.t_degc, frame.theta_rad]])
            )[0]
        )
        theta_hat = float(predict_pose(self.pose_model, frame.t_degc, frame.r_ohm)[0])
        led = LED_COLOR[classify3(f_hat, self.t_lo, self.t_hi)]
        out = DemoState(
            tick=self.tick,
            t_s=self.tick * self.scenario.tick,
            theta_true=self.state.theta,
            theta_hat=theta_hat,
            f_ext_hat=f_hat,
            led=led,
            temp_c=frame.t_degc,
            resistance_ohm=frame.r_ohm,
            setpoint=self.setpoint,
            human_force=self.human_force,
        )
        self.tick += 1
        return out


# ---------------------------------------------------------------------------
# headless replay


def parse_replay_script(text: str) -> list[tuple[int, dict]]:
    """Replay scripts: one '<tick> <json-command>' per line, # comments."""
    commands = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tick_str, _, payload = line.partition(" ")
        try:
            tick = int(tick_str)
            msg = json.loads(payload)
        except (ValueError, json.JSONDecodeError) as exc:
            raise ValueError(f"replay script line {lineno}: {exc}") from None
        commands.append((tick, msg))
    return sorted(commands, key=lambda c: c[0])


def run_headless(loop: DemoLoop, commands: list[tuple[int, dict]], ticks: int) -> list[DemoState]:
    """Run the loop unpaced, applying commands at their ticks."""
    pending = sorted(commands, key=lambda c: c[0])
    states = []
    i = 0
    for tick in range(ticks):
        while i < len(pending) and pending[i][0] <= tick:
            loop.handle_command(pending[i][1])
            i += 1
        states.append(loop.step_once())
    return states


def write_state_log(states: list[DemoState], path) -> None:
    with open(path, "w") as fh:
        for s in states:
            fh.write(s.to_json_line() + "\n")


# ---------------------------------------------------------------------------
# socket server (raw TCP line protocol + a minimal WebSocket bridge)

_WS_MAGIC = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"


def _ws_accept_key(client_key: str) -> str:
    digest = hashlib.sha1((client_key + _WS_MAGIC).encode()).digest()
    return base64.b64encode(digest).decode()


def _ws_encode_text(payload: bytes) -> bytes:
    header = bytearray([0x81])
    n = len(payload)
    if n < 126:
        header.append(n)
    elif n < 1 << 16:
        header.append(126)
        header += struct.pack(">H", n)
    else:
        header.append(127)
        header += struct.pack(">Q", n)
    return bytes(header) + payload


class _WsStream:
    """Blocking text-frame reader/writer over an accepted socket."""

    def __init__(self, sock: socket.socket):
        self.sock = sock

    def handshake(self, first_chunk: bytes) -> None:
        data = first_chunk
        while b"\r\n\r\n" not in data:
            chunk = self.sock.recv(1024)
            if not chunk:
                raise ConnectionError("client closed during handshake")
            data += chunk
        headers = {}
        for line in data.split(b"\r\n")[1:]:
            if b":" in line:
                k, v = line.split(b":", 1)
                headers[k.strip().lower()] = v.strip()
        key = headers.get(b"sec-websocket-key")
        if key is None:
            raise ConnectionError("not a websocket handshake")
        resp = (
            "HTTP/1.1 101 Switching Protocols\r\n"
            "Upgrade: websocket\r\n"
            "Connection: Upgrade\r\n"
            f"Sec-WebSocket-Accept: {_ws_accept_key(key.decode())}\r\n\r\n"
        )
        self.sock.sendall(resp.encode())

    def _recv_exact(self, n: int) -> bytes:
        buf = b""
        while len(buf) < n:
            chunk = self.sock.recv(n - len(buf))
            if not chunk:
                raise ConnectionError("client closed")
            buf += chunk
        return buf

    def read_text(self) -> str | None:
        """Next text payload; None when the client closed cleanly."""
        while True:
            head = self._recv_exact(2)
            opcode = head[0] & 0x0F
            masked = head[1] & 0x80
            length = head[1] & 0x7F
            if length == 126:
                length = struct.unpack(">H", self._recv_exact(2))[0]
            elif length == 127:
                length = struct.unpack(">Q", self._recv_exact(8))[0]
            mask = self._recv_exact(4) if masked else b"\x00" * 4
            payload = bytearray(self._recv_exact(length))
            for i in range(length):
                payload[i] ^= mask[i % 4]
            if opcode == 0x8:          # close
                return None
            if opcode == 0x9:          # ping -> pong
                self.sock.sendall(bytes([0x8A, len(payload)]) + bytes(payload))
                continue
            if opcode in (0x1, 0x2):
                return payload.decode("utf-8", errors="replace")

    def send_text(self, line: str) -> None:
        self.sock.sendall(_ws_encode_text(line.encode()))


class DemoServer:
    """Socket fan-out around a DemoLoop.

    The loop thread steps the simulation at the configured pace and
    pushes each broadcast line into per-client queues; client threads
    only read their queue and parse inbound commands into the command
    queue.  Nothing outside the loop thread touches simulation state.
    """

    def __init__(self, loop: DemoLoop, port: int = DEFAULT_PORT, host: str = "127.0.0.1",
                 tick_wall_s: float | None = None, heartbeat_s: float = HEARTBEAT_S):
        self.loop = loop
        self.host = host
        self.port = port
        self.tick_wall_s = loop.tick_s if tick_wall_s is None else tick_wall_s
        self.heartbeat_s = heartbeat_s
        self.commands: queue.Queue = queue.Queue()
        self._clients: dict[int, queue.Queue] = {}
        self._clients_lock = threading.Lock()
        self._next_client = 0
        self._stop = threading.Event()
        self._server_sock: socket.socket | None = None
        self._threads: list[threading.Thread] = []

    # -- lifecycle

    def start(self) -> int:
        self._server_sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._server_sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._server_sock.bind((self.host, self.port))
        self._server_sock.listen(8)
        self.port = self._server_sock.getsockname()[1]
        for target in (self._accept_forever, self._run_loop):
            t = threading.Thread(target=target, daemon=True)
            t.start()
            self._threads.append(t)
        return self.port

    def stop(self) -> None:
        self._stop.set()
        if self._server_sock is not None:
            try:
                self._server_sock.close()
            except OSError:
                pass
        for t in self._threads:
            t.join(timeout=2.0)

    def serve_forever(self) -> None:
        if self._server_sock is None:
            self.start()
        try:
            while not self._stop.is_set():
                time.sleep(0.2)
        except KeyboardInterrupt:
            pass
        finally:
            self.stop()

    # -- simulation thread

    def _run_loop(self) -> None:
        heartbeat_every = max(1, round(self.heartbeat_s / self.tick_wall_s))
        next_deadline = time.monotonic()
        while not self._stop.is_set():
            while True:
                try:
                    reply_to, msg = self.commands.get_nowait()
                except queue.Empty:
                    break
                try:
                    reply = self.loop.handle_command(msg)
                except CommandError as exc:
                    reply = {"type": "error", "message": str(exc)}
                if reply_to is not None:
                    self._send_to(reply_to, json.dumps(reply))
            state = self.loop.step_once()
            self._broadcast(state.to_json_line())
            if state.tick % heartbeat_every == 0 and state.tick > 0:
                self._broadcast(
                    json.dumps({"type": "heartbeat", "v": PROTOCOL_VERSION, "tick": state.tick})
                )
            next_deadline += self.tick_wall_s
            delay = next_deadline - time.monotonic()
            if delay > 0:
                time.sleep(delay)
            else:
                next_deadline = time.monotonic()

    def _broadcast(self, line: str) -> None:
        with self._clients_lock:
            for q in self._clients.values():
                q.put(line)

    def _send_to(self, client_id: int, line: str) -> None:
        with self._clients_lock:
            q = self._clients.get(client_id)
        if q is not None:
            q.put(line)

    # -- client threads

    def _accept_forever(self) -> None:
        assert self._server_sock is not None
        while not self._stop.is_set():
            try:
                sock, _addr = self._server_sock.accept()
            except OSError:
                return
            t = threading.Thread(target=self._serve_client, args=(sock,), daemon=True)
            t.start()

    def _serve_client(self, sock: socket.socket) -> None:
        client_id = None
        try:
            sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
            # WebSocket clients start talking immediately (HTTP handshake);
            # raw TCP clients may listen silently, so only peek briefly.
            sock.settimeout(0.25)
            try:
                first = sock.recv(4, socket.MSG_PEEK)
            except (TimeoutError, socket.timeout):
                first = b""
            sock.settimeout(None)
            outbox: queue.Queue = queue.Queue()
            client_id = self._register(outbox)
            if first.startswith(b"GET "):
                ws = _WsStream(sock)
                ws.handshake(sock.recv(65536))
                writer = threading.Thread(
                    target=self._pump_outbox, args=(outbox, ws.send_text), daemon=True
                )
                writer.start()
                while not self._stop.is_set():
                    text = ws.read_text()
                    if text is None:
                        return
                    self._ingest_line(client_id, text)
            else:
                writer = threading.Thread(
                    target=self._pump_outbox,
                    args=(outbox, lambda line: sock.sendall((line + "\n").encode())),
                    daemon=True,
                )
                writer.start()
                buf = b""
                while not self._stop.is_set():
                    chunk = sock.recv(4096)
                    if not chunk:
                        return
                    buf += chunk
                    if len(buf) > MAX_LINE_BYTES:
                        return  # protocol violation: unbounded line
                    while b"\n" in buf:
                        line, buf = buf.split(b"\n", 1)
                        self._ingest_line(client_id, line.decode("utf-8", errors="replace"))
        except (ConnectionError, OSError):
            pass
        finally:
            if client_id is not None:
                self._unregister(client_id)
            try:
                sock.close()
            except OSError:
                pass

    def _ingest_line(self, client_id: int, text: str) -> None:
        text = text.strip()
        if not text:
            return
        try:
            msg = json.loads(text)
        except json.JSONDecodeError:
            # not even JSON: protocol violation, drop the connection
            raise ConnectionError("non-JSON input")
        self.commands.put((client_id, msg))

    def _pump_outbox(self, outbox: queue.Queue, send) -> None:
        while not self._stop.is_set():
            try:
                line = outbox.get(timeout=0.5)
            except queue.Empty:
                continue
            try:
                send(line)
            except (ConnectionError, OSError):
                return

    def _register(self, outbox: queue.Queue) -> int:
        with self._clients_lock:
            self._next_client += 1
            self._clients[self._next_client] = outbox
            return self._next_client

    def _unregister(self, client_id: int) -> None:
        with self._clients_lock:
            self._clients.pop(client_id, None)
