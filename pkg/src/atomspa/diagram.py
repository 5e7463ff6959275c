"""Schedule diagrams: the three-layer pattern view as SVG and text grid.

Top layer: register activity (addressing marks and the store cycle that
follows).  Middle layer: the add/subtract unit (loads and the processing
cycle, colored by operation).  Bottom layer: the multiplier (partial
products in red, the output cycle in light red, waiting cycles pale).  An
overlay variant marks every cycle whose bus addressing differs between the
doubling and addition patterns.
"""

from atomspa.atoms import PATTERNS, REGISTER_NAMES
from atomspa.sched import addressing_diff

MULT_COLORS = {
    "load1": "#9fd49f", "load2": "#9fd49f",
    "out": "#f6b0a0", "wait_first": "#fbd9d0", "wait": "#ffffff",
    "idle": "#ffffff",
}
for i in range(1, 10):
    MULT_COLORS[f"pp{i}"] = "#e05545"

ADDSUB_COLORS = {"add": "#6f8fd8", "sub": "#c77bc9"}


def _op_kind_by_cycle(schedule):
    """Map addsub activity cycles to 'add'/'sub' of the owning operation."""
    kinds = {op.index: op.kind for op in PATTERNS[schedule.kind]}
    out = {}
    for op_index, roles in schedule.op_cycles.items():
        if kinds.get(op_index) in ("add", "sub"):
            for role, cycles in roles.items():
                if role.startswith(("fetch", "latch")):
                    for c in cycles:
                        out[c] = kinds[op_index]
    # processing cycles carry the same op as the preceding load
    for ev in schedule.events:
        if ev.addsub_state == "store" and ev.cycle not in out:
            out[ev.cycle] = out.get(ev.cycle - 1, "add")
    return out


def text_grid(schedule):
    """Plain-text rendering, one column per clock cycle."""
    if not schedule.events:
        return "(empty schedule)\n"
    n = schedule.cycle_count
    header = "".join(f"{c:<4d}" for c in range(1, n + 1))
    rows = {
        "bus src  ": [],
        "bus dst  ": [],
        "reg store": [],
        "add/sub  ": [],
        "mult     ": [],
    }
    short = {"load1": "L1", "load2": "L2", "store": "ST", "out": "OUT",
             "wait_first": "w1", "wait": "w", "idle": ""}
    for ev in schedule.events:
        rows["bus src  "].append(ev.src_name or "")
        regs = [d for d in ev.dst_names]
        rows["bus dst  "].append("+".join(regs))
        rows["reg store"].append("+".join(ev.reg_store))
        rows["add/sub  "].append(short.get(ev.addsub_state, ev.addsub_state))
        m = ev.mult_state
        rows["mult     "].append(m.upper() if m.startswith("pp")
                                 else short.get(m, m))
    lines = [f"pattern {schedule.kind}, {n} cycles", "cycle    " + header]
    for name, cells in rows.items():
        lines.append(name + "".join(f"{c[:3]:<4s}" for c in cells))
    return "\n".join(lines) + "\n"


def schedule_svg(schedule, overlay_diff=None, cell=11, title=None):
    """Three-layer SVG; overlay_diff marks differing cycles when given."""
    n = schedule.cycle_count
    left, top = 70, 30
    reg_rows = list(REGISTER_NAMES)
    reg_h = 10
    layer_gap = 14
    reg_band = len(reg_rows) * reg_h
    addsub_y = top + reg_band + layer_gap
    mult_y = addsub_y + 22 + layer_gap
    width = left + n * cell + 20
    height = mult_y + 22 + 40

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}" '
        f'font-family="monospace" font-size="9">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left}" y="16" font-size="12">'
        f'{title or f"pattern {schedule.kind}"} '
        f'({n} cycles)</text>',
    ]
    if not schedule.events:
        out.append("</svg>")
        return "\n".join(out) + "\n"

    reg_y = {r: top + i * reg_h for i, r in enumerate(reg_rows)}
    for r, y in reg_y.items():
        out.append(f'<text x="6" y="{y + 8}">{r}</text>')
    out.append(f'<text x="6" y="{addsub_y + 14}">add/sub</text>')
    out.append(f'<text x="6" y="{mult_y + 14}">mult</text>')

    kinds = _op_kind_by_cycle(schedule)
    for ev in schedule.events:
        x = left + (ev.cycle - 1) * cell
        # register layer: addressing (green) and stores (grey)
        for d in ev.dst_names:
            if d in reg_y:
                out.append(f'<rect x="{x}" y="{reg_y[d]}" width="{cell-1}" '
                           f'height="{reg_h-1}" fill="#49b849"/>')
        if ev.src_name in reg_y:
            out.append(f'<rect x="{x}" y="{reg_y[ev.src_name]}" '
                       f'width="{cell-1}" height="{reg_h-1}" fill="none" '
                       f'stroke="#49b849" stroke-width="1"/>')
        for d in ev.reg_store:
            if d in reg_y:
                out.append(f'<rect x="{x}" y="{reg_y[d]}" width="{cell-1}" '
                           f'height="{reg_h-1}" fill="#b5b5b5"/>')
        # add/sub layer
        if ev.addsub_state != "idle":
            color = ADDSUB_COLORS.get(kinds.get(ev.cycle, "add"))
            light = ev.addsub_state != "store"
            out.append(f'<rect x="{x}" y="{addsub_y}" width="{cell-1}" '
                       f'height="21" fill="{color}" '
                       f'opacity="{0.55 if light else 1.0}"/>')
        # multiplier layer
        color = MULT_COLORS.get(ev.mult_state, "#ffffff")
        if color != "#ffffff":
            out.append(f'<rect x="{x}" y="{mult_y}" width="{cell-1}" '
                       f'height="21" fill="{color}"/>')
        if ev.cycle % 10 == 0 or ev.cycle == 1:
            out.append(f'<text x="{x}" y="{height - 22}">{ev.cycle}</text>')

    if overlay_diff:
        for c, _info in overlay_diff:
            x = left + (c - 1) * cell
            out.append(f'<rect x="{x}" y="{top - 4}" width="{cell-1}" '
                       f'height="{mult_y + 25 - top + 4}" fill="none" '
                       f'stroke="#d4a017" stroke-width="1.5"/>')
    out.append(f'<text x="{left}" y="{height - 6}" font-size="10">'
               'green: addressing, grey: store, red: partial products, '
               'light red: output/first wait</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_diagram(schedule, out_base, overlay_with=None):
    """Write SVG and text grid for a schedule; returns the file paths.

    overlay_with: a second schedule; differing cycles get outlined.
    """
    diff = addressing_diff(schedule, overlay_with) if overlay_with else None
    svg_path = f"{out_base}.svg"
    txt_path = f"{out_base}.txt"
    with open(svg_path, "w") as f:
        f.write(schedule_svg(schedule, overlay_diff=diff))
    with open(txt_path, "w") as f:
        f.write(text_grid(schedule))
    return [svg_path, txt_path]
