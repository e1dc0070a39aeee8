"""Shared argument handling for the demo scripts."""
import argparse
from pathlib import Path

CONFIGS = Path(__file__).resolve().parent / "configs"


def parser(doc: str, grid: int = 32) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=doc.strip().splitlines()[0])
    p.add_argument("--grid", type=int, default=grid, help=f"cells per side (default {grid})")
    p.add_argument("--t-final", type=float, default=1.0, help="final time (default 1)")
    return p
