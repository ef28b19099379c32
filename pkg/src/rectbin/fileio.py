"""Text formats for instances and packings.

Both formats are line oriented and bit exact: every number is a rational
written as `p/q` (or a plain integer), and decimals in input are read as
p/10^d without rounding.  parse(serialize(x)) returns x unchanged.
"""

from fractions import Fraction

from .errors import ParseError
from .geometry import BinLayout, Instance, Item, Packing


def _rational(tok, lineno):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(lineno, f"bad rational {tok!r}") from None


def _int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"bad integer {tok!r}") from None


def _rows(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_instance(text: str) -> Instance:
    rows = _rows(text)
    try:
        lineno, head = next(rows)
    except StopIteration:
        raise ParseError(1, "empty input, expected `items N`") from None
    if len(head) != 2 or head[0] != "items":
        raise ParseError(lineno, f"expected `items N`, got {' '.join(head)!r}")
    n = _int(head[1], lineno)
    items = []
    for _ in range(n):
        try:
            lineno, row = next(rows)
        except StopIteration:
            raise ParseError(
                lineno, f"expected {n} item lines, got {len(items)}"
            ) from None
        if len(row) != 3:
            raise ParseError(lineno, f"expected `ID W H`, got {' '.join(row)!r}")
        ident = _int(row[0], lineno)
        w = _rational(row[1], lineno)
        h = _rational(row[2], lineno)
        try:
            items.append(Item(ident, w, h))
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
    for lineno, row in rows:
        raise ParseError(lineno, f"trailing content {' '.join(row)!r}")
    try:
        return Instance(items)
    except ValueError as exc:
        raise ParseError(1, str(exc)) from None


def serialize_instance(instance: Instance) -> str:
    out = [f"items {len(instance.items)}"]
    for it in instance.items:
        out.append(f"{it.id} {it.width} {it.height}")
    return "\n".join(out) + "\n"


def parse_packing(text: str) -> Packing:
    rows = _rows(text)
    try:
        head_line, head = next(rows)
    except StopIteration:
        raise ParseError(1, "empty input, expected `bins B`") from None
    if len(head) != 2 or head[0] != "bins":
        raise ParseError(head_line, f"expected `bins B`, got {' '.join(head)!r}")
    count = _int(head[1], head_line)
    bins = []
    current = None
    for lineno, row in rows:
        if row[0] == "bin":
            if len(row) != 2:
                raise ParseError(lineno, "expected `bin I`")
            idx = _int(row[1], lineno)
            if idx != len(bins):
                raise ParseError(
                    lineno, f"bin {idx} out of order, expected {len(bins)}"
                )
            current = BinLayout(1, 1)
            bins.append(current)
        else:
            if current is None:
                raise ParseError(lineno, "placement before any `bin` header")
            if len(row) != 3:
                raise ParseError(
                    lineno, f"expected `ID X Y`, got {' '.join(row)!r}"
                )
            ident = _int(row[0], lineno)
            x = _rational(row[1], lineno)
            y = _rational(row[2], lineno)
            current.add(ident, x, y)
    if len(bins) != count:
        raise ParseError(head_line, f"header declared {count} bins, file has {len(bins)}")
    return Packing(bins)


def serialize_packing(packing: Packing) -> str:
    out = [f"bins {len(packing.bins)}"]
    for i, layout in enumerate(packing.bins):
        out.append(f"bin {i}")
        for p in layout.placements:
            out.append(f"{p.item_id} {p.x} {p.y}")
    return "\n".join(out) + "\n"
