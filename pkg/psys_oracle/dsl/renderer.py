from psys_oracle.domain.model import SystemSpec
from psys_oracle.dsl.parser import HEADER


def render_system(spec: SystemSpec) -> str:
    """
    Canonical .psys text for a validated spec.

    Sections come in a fixed order, multisets are sorted by symbol name and rules
    keep their ordinal order, so parse_system(render_system(s)) == s.
    """
    lines = [
        HEADER,
        "@objects " + " ".join(sorted(spec.alphabet)),
        "@labels " + " ".join(sorted(spec.labels)),
        f"@skin {spec.skin}",
        f"@init {spec.skin} : {spec.skin_init.render()}",
    ]
    for inner in spec.inner_init:
        lines.append(f"@inner {inner.label} : {inner.contents.render()}")
    if spec.input_label is not None:
        lines.append(f"@input {spec.input_label}")
    lines.append(f"@bound {spec.bound}")
    lines.append("@rules")
    lines.extend(rule.notation() for rule in spec.rules)
    return "\n".join(lines) + "\n"
