"""
An MCP stdio server exposing the calculus as tools: series expansion,
verification suites and coefficient tables.
"""
import asyncio
import logging
from typing import Any

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import TextContent
from mcp.types import Tool

from b_expansion import expand_named
from config import load_config
from errors import EngineError
from rendering import render_coefficient_tables
from rendering import render_poly
from rendering import render_reports
from series_builders import SeriesId
from series_builders import plain_core
from verifier import SUITES
from verifier import run_suites

server = Server("seacalc")

MAX_TOOL_ORDER = 8


def get_int_argument(arguments: dict[str, Any], name: str, default: int) -> int:
    """Read an optional integer argument, rejecting negative or oversized values."""
    value = arguments.get(name, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if not 0 <= value <= MAX_TOOL_ORDER:
        raise ValueError(f"{name} must be between 0 and {MAX_TOOL_ORDER}, got {value}")
    return value


@server.list_tools()
async def handle_list_tools() -> list[Tool]:
    """List available tools."""
    return [
        Tool(
            name="expand_series",
            description="Expand a named perturbation series with exact coefficients",
            inputSchema={
                "type": "object",
                "properties": {
                    "series": {
                        "type": "string",
                        "enum": [s.value for s in SeriesId],
                        "description": "Series identifier, e.g. Ktilde or P",
                    },
                    "order": {
                        "type": "integer",
                        "description": "Truncation order",
                        "default": 3,
                    },
                    "layer": {
                        "type": "string",
                        "enum": ["pk", "b"],
                        "description": "pk: b-line cores, b: expanded B-words",
                        "default": "b",
                    },
                    "format": {
                        "type": "string",
                        "enum": ["text", "json", "latex"],
                        "default": "text",
                    },
                },
                "required": ["series"],
            },
        ),
        Tool(
            name="verify_suite",
            description="Run an identity suite and report residuals",
            inputSchema={
                "type": "object",
                "properties": {
                    "suite": {
                        "type": "string",
                        "enum": ["all", *SUITES],
                        "description": "Suite name",
                    },
                    "order": {
                        "type": "integer",
                        "description": "pk-layer order (defaults to the configured one)",
                    },
                },
                "required": ["suite"],
            },
        ),
        Tool(
            name="coefficient_table",
            description="Exact values of c_n, e_n, f_(l,r) and c(r, rho)",
            inputSchema={
                "type": "object",
                "properties": {
                    "rmax": {"type": "integer", "default": 6},
                },
                "required": [],
            },
        ),
    ]


@server.call_tool()
async def handle_call_tool(name: str, arguments: dict[str, Any]) -> list[TextContent]:
    """Handle tool calls."""
    arguments = arguments or {}
    try:
        config = load_config()
        if name == "expand_series":
            series = SeriesId.parse(str(arguments.get("series", "")))
            order = get_int_argument(arguments, "order", config.default_order_b)
            output_format = arguments.get("format", "text")
            if arguments.get("layer", "b") == "pk":
                poly = plain_core(series, order)
            else:
                poly = expand_named(series, order)
            text = render_poly(poly, output_format, series.value)
        elif name == "verify_suite":
            order = get_int_argument(arguments, "order", config.default_order_pk)
            reports = run_suites([str(arguments.get("suite", ""))], config, order_pk=order)
            text = render_reports(reports, "text", include_timing=False)
        elif name == "coefficient_table":
            rmax = get_int_argument(arguments, "rmax", 6)
            text = render_coefficient_tables(rmax)
        else:
            return [TextContent(type="text", text=f"Unknown tool: {name}")]
    except (EngineError, ValueError) as e:
        logging.error(f"Tool {name} failed: {e}")
        return [TextContent(type="text", text=f"Error: {e}")]
    return [TextContent(type="text", text=text)]


async def main():
    """Main entry point for the server."""
    async with stdio_server() as (read_stream, write_stream):
        await server.run(
            read_stream,
            write_stream,
            server.create_initialization_options(),
        )


if __name__ == "__main__":
    asyncio.run(main())
