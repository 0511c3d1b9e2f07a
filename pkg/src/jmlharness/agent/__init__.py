"""Verifier-guided contract synthesis with a chat model in the loop."""

from .guard import GuardResult, guard_code_unaltered
from .loop import TOOLS, AgentConfig, Outcome, Step, Trajectory, run_veriact, system_prompt
from .providers import ChatProvider, HTTPChatProvider, ProviderError, Reply, ScriptedProvider, ToolCall
from .render import MAX_OBSERVATION, render_tool_result, truncate

__all__ = [
    "AgentConfig", "ChatProvider", "GuardResult", "HTTPChatProvider", "MAX_OBSERVATION", "Outcome",
    "ProviderError", "Reply", "ScriptedProvider", "Step", "TOOLS", "ToolCall", "Trajectory",
    "guard_code_unaltered", "render_tool_result", "run_veriact", "system_prompt", "truncate",
]
