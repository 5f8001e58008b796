from .parser import load_system, parse_multiset, parse_system
from .renderer import render_system

__all__ = ["load_system", "parse_multiset", "parse_system", "render_system"]
