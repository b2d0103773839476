"""Import graph of the installed package, read from source with ast."""

from __future__ import annotations

import ast
from pathlib import Path

import seawatch

ROOT = Path(seawatch.__file__).parent


def module_name(path: Path) -> str:
    rel = path.relative_to(ROOT.parent).with_suffix("")
    parts = rel.parts[:-1] if rel.name == "__init__" else rel.parts
    return ".".join(parts)


def imports_of(path: Path) -> set[str]:
    tree = ast.parse(path.read_text(), str(path))
    found = set()
    pkg = module_name(path) if path.name == "__init__.py" else module_name(path).rpartition(".")[0]
    for node in ast.walk(tree):
        if isinstance(node, ast.Import):
            found.update(a.name for a in node.names)
        elif isinstance(node, ast.ImportFrom):
            if node.level:
                base = pkg.split(".")
                base = base[: len(base) - node.level + 1]
                mod = ".".join(base + ([node.module] if node.module else []))
            else:
                mod = node.module or ""
            found.add(mod)
            found.update(f"{mod}.{a.name}" for a in node.names)
    return {m for m in found if m == "seawatch" or m.startswith("seawatch.")}


def graph() -> dict[str, set[str]]:
    return {module_name(p): imports_of(p) for p in sorted(ROOT.rglob("*.py"))}


def layer(module: str) -> str:
    parts = module.split(".")
    return parts[1] if len(parts) > 1 else "root"


def violations() -> list[str]:
    """Edges that break the dependency direction."""
    allowed = {
        "core": {"core"},
        "ports": {"core", "ports"},
        "simgen": {"core", "simgen"},
        "adapters": {"core", "ports", "adapters", "simgen"},
        "services": {"core", "ports", "adapters", "services", "simgen"},
        "harness": {"core", "ports", "services", "harness", "simgen"},
        "data": set(),
        "root": set(),
    }
    shared_service_modules = {"seawatch.services.cli", "seawatch.services.report", "seawatch.services.wiring"}
    bad = []
    for src, targets in graph().items():
        for dst in targets:
            if dst == "seawatch":
                continue
            if layer(dst) not in allowed[layer(src)]:
                bad.append(f"{src} -> {dst}")
            if layer(src) == "services" and src not in ("seawatch.services.wiring", "seawatch.services"):
                if layer(dst) == "adapters":
                    bad.append(f"{src} -> {dst} (adapter outside the composition root)")
                if (
                    layer(dst) == "services"
                    and src != "seawatch.services"
                    and dst not in shared_service_modules
                    and not dst.startswith(tuple(m + "." for m in shared_service_modules))
                    and dst != "seawatch.services"
                ):
                    bad.append(f"{src} -> {dst} (another service's internals)")
    return bad
