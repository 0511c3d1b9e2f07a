"""Chat providers: a scripted replay for reproducible runs and an HTTP client.

The HTTP provider speaks the OpenAI-compatible chat-completions shape:

request  ``POST {endpoint}/chat/completions``
    ``model``        model name
    ``messages``     list of ``{"role", "content"}``; assistant turns carry
                     ``tool_calls`` and tool turns carry ``tool_call_id``
    ``tools``        ``[{"type": "function", "function": {name, description, parameters}}]``
    ``tool_choice``  ``"required"``
    ``temperature``  0, plus ``seed`` when configured
response ``choices[0].message``
    ``content``      free text, kept as the step's thought
    ``tool_calls[0].function.name`` and ``.arguments`` (a JSON string)

The API key is read from the environment variable named by ``api_key_env``
and sent as a bearer token.
"""

from __future__ import annotations

import json
import os
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol


class ProviderError(RuntimeError):
    pass


@dataclass(frozen=True)
class ToolCall:
    name: str
    arguments: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Reply:
    """One provider answer; ``tool_call`` is None for a plain-text (malformed) answer."""

    thought: str = ""
    tool_call: Optional[ToolCall] = None
    error: str = ""  # why the answer could not be read as a tool call


class ChatProvider(Protocol):
    identity: str
    deterministic: bool

    def complete(self, messages: list, tools: list) -> Reply: ...


def _reply_from_entry(entry) -> Reply:
    if not isinstance(entry, dict):
        return Reply(error=f"script entry is not an object: {entry!r}")
    thought = entry.get("thought", "")
    if "tool" not in entry:
        return Reply(thought=entry.get("text", thought), error="no tool call in reply")
    args = entry.get("arguments", {})
    if not isinstance(args, dict):
        return Reply(thought=thought, error="tool arguments must be an object")
    return Reply(thought, ToolCall(entry["tool"], args))


class ScriptedProvider:
    """Replays a fixed list of replies, ignoring the conversation.

    Entries look like ``{"thought": ..., "tool": name, "arguments": {...}}``;
    an entry without ``tool`` is a malformed reply.  With ``cycle`` the script
    repeats, otherwise running past its end raises ProviderError.
    """

    deterministic = True

    def __init__(self, entries, cycle: bool = False, name: str = "scripted"):
        self.entries = list(entries)
        if not self.entries:
            raise ValueError("empty script")
        self.cycle = cycle
        self.identity = name
        self._pos = 0

    @classmethod
    def from_file(cls, path) -> "ScriptedProvider":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(data, list):
            return cls(data, name=f"scripted:{Path(path).stem}")
        return cls(data["responses"], bool(data.get("cycle", False)), f"scripted:{Path(path).stem}")

    def reset(self) -> None:
        self._pos = 0

    def complete(self, messages: list, tools: list) -> Reply:
        if self._pos >= len(self.entries):
            if not self.cycle:
                raise ProviderError("script exhausted")
            self._pos = 0
        entry = self.entries[self._pos]
        self._pos += 1
        return _reply_from_entry(entry)


@dataclass
class HTTPChatProvider:
    endpoint: str
    model: str
    api_key_env: str = "JMLHARNESS_API_KEY"
    timeout: float = 120.0
    seed: Optional[int] = None
    deterministic: bool = False

    @property
    def identity(self) -> str:
        return f"http:{self.model}@{self.endpoint}"

    def _payload(self, messages, tools) -> dict:
        body = {
            "model": self.model,
            "messages": messages,
            "tools": [{"type": "function", "function": t} for t in tools],
            "tool_choice": "required",
            "temperature": 0,
        }
        if self.seed is not None:
            body["seed"] = self.seed
        return body

    def complete(self, messages: list, tools: list) -> Reply:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        req = urllib.request.Request(
            self.endpoint.rstrip("/") + "/chat/completions",
            data=json.dumps(self._payload(messages, tools)).encode(),
            headers=headers,
            method="POST",
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                data = json.loads(resp.read().decode())
        except (urllib.error.URLError, OSError, json.JSONDecodeError) as exc:
            raise ProviderError(f"chat request failed: {exc}") from exc
        return parse_chat_response(data)


def parse_chat_response(data: dict) -> Reply:
    try:
        msg = data["choices"][0]["message"]
    except (KeyError, IndexError, TypeError):
        raise ProviderError(f"unexpected response shape: {str(data)[:200]}") from None
    thought = msg.get("content") or ""
    calls = msg.get("tool_calls") or []
    if len(calls) != 1:
        return Reply(thought, error=f"expected exactly one tool call, got {len(calls)}")
    fn = calls[0].get("function", {})
    try:
        args = json.loads(fn.get("arguments") or "{}")
    except json.JSONDecodeError as exc:
        return Reply(thought, error=f"tool arguments are not JSON: {exc}")
    if not isinstance(args, dict):
        return Reply(thought, error="tool arguments must be an object")
    return Reply(thought, ToolCall(fn.get("name", ""), args))
