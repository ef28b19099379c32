"""Static SVG output, one file per bin."""

import os

SIZE = 512
FILLS = (
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
    "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
)


def _px(value):
    # 3 decimals at 512 units keeps sub-pixel accuracy and stable output
    return f"{float(value) * SIZE:.3f}"


def render_bin(layout, items_by_id) -> str:
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" '
        'fill="white" stroke="black"/>',
    ]
    for p in layout.placements:
        it = items_by_id[p.item_id]
        # flip: file y grows downward, packing y grows upward
        top = 1 - p.y - it.height
        fill = FILLS[p.item_id % len(FILLS)]
        parts.append(
            f'<rect x="{_px(p.x)}" y="{_px(top)}" width="{_px(it.width)}" '
            f'height="{_px(it.height)}" fill="{fill}" stroke="black" '
            'stroke-width="1"/>'
        )
        cx = _px(p.x + it.width / 2)
        cy = _px(top + it.height / 2)
        parts.append(
            f'<text x="{cx}" y="{cy}" font-size="14" font-family="monospace" '
            f'text-anchor="middle" dominant-baseline="middle">{p.item_id}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_packing(packing, instance, out_dir) -> list:
    """Write one SVG per bin into out_dir; returns the file paths."""
    os.makedirs(out_dir, exist_ok=True)
    lookup = instance.by_id()
    paths = []
    for i, layout in enumerate(packing.bins):
        path = os.path.join(out_dir, f"bin_{i:03d}.svg")
        with open(path, "w") as fh:
            fh.write(render_bin(layout, lookup))
        paths.append(path)
    return paths
