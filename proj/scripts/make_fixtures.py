#!/usr/bin/env python3
"""Writes the shape scripts and workflow cases under fixtures/.

Shape coordinates are authored here; gold cells come from a small gravity
simulator that is independent of the C++ code. Output is deterministic.
"""

import argparse
import json
import random
from pathlib import Path

SIZE = 16
BRIDGE_X = "horizontal-bridge"
BRIDGE_Y = "vertical-bridge"
PLURAL = {"nut": "nuts", "screw": "screws", "bolt": "bolts", "washer": "washers", "gasket": "gaskets"}
CARDINAL = {2: "two", 3: "three", 4: "four", 5: "five", 6: "six", 7: "seven", 8: "eight"}


def ordinal(n):
    if 10 <= n % 100 <= 20:
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    return f"{n}{suffix}"


def spoken(kind):
    return kind.replace("-", " ")


def cells(kind, x, y, z):
    if kind == BRIDGE_X:
        return [(x, y, z), (x + 1, y, z)]
    if kind == BRIDGE_Y:
        return [(x, y, z), (x, y + 1, z)]
    return [(x, y, z)]


class Board:
    def __init__(self):
        self.occupied = {}
        self.parts = []

    def top(self, x, y):
        return max([c[2] for c in self.occupied if c[0] == x and c[1] == y], default=0)

    def drop(self, kind, x, y):
        return 1 + max(self.top(cx, cy) for cx, cy, _ in cells(kind, x, y, 1))

    def place(self, kind, color, x, y, z=None):
        if z is None:
            z = self.drop(kind, x, y)
        footprint = cells(kind, x, y, z)
        for c in footprint:
            assert all(1 <= v <= SIZE for v in c), (kind, c)
            assert c not in self.occupied, ("occupied", c)
        if z > 1:
            assert any((cx, cy, z - 1) in self.occupied for cx, cy, _ in footprint), ("unsupported", footprint)
        part = {"part": kind, "color": color, "x": x, "y": y, "z": z}
        for c in footprint:
            self.occupied[c] = part
        self.parts.append(part)
        return part


class Script:
    """Builds a dialogue turn by turn while tracking the expected board."""

    def __init__(self):
        self.board = Board()
        self.turns = []
        self._clauses = []
        self._adds = []
        self._last = None

    def _add(self, kind, color, x, y, z=None):
        self._last = self.board.place(kind, color, x, y, z)
        self._adds.append(self._last)

    def single(self, kind, color, x, y, height=False):
        where = self._where(kind, x, y)
        self._add(kind, color, x, y)
        if height:
            where += f", height {self._last['z']}"
        self._clauses.append(f"a {color} {spoken(kind)} at {where}")
        return self

    def _where(self, kind, x, y):
        if kind == BRIDGE_X:
            return f"the {ordinal(x)} and {ordinal(x + 1)} columns, {ordinal(y)} row"
        if kind == BRIDGE_Y:
            return f"the {ordinal(x)} column, {ordinal(y)} and {ordinal(y + 1)} rows"
        return f"the {ordinal(x)} column, {ordinal(y)} row"

    def group(self, axis, count, kind, color, x, y):
        self._add(kind, color, x, y)
        for _ in range(count - 1):
            p = self._last
            if axis == "row":
                self._add(kind, color, p["x"] + 1, p["y"])
            elif axis == "column":
                self._add(kind, color, p["x"], p["y"] + 1)
            else:
                self._add(kind, color, p["x"], p["y"], p["z"] + 1)
        self._clauses.append(
            f"a {axis} of {CARDINAL[count]} {color} {PLURAL[kind]} at the {ordinal(x)} column, {ordinal(y)} row")
        return self

    def relative(self, kind, color, relation, target="it", count=1):
        anchor = self._resolve(target)
        dx, dy, dz = {"on top of": (0, 0, 1), "next to": (1, 0, 0), "to the right of": (1, 0, 0),
                      "to the left of": (-1, 0, 0), "in front of": (0, 1, 0), "behind": (0, -1, 0)}[relation]
        x, y = anchor["x"] + dx, anchor["y"] + dy
        if relation == "on top of":
            self._add(kind, color, x, y, anchor["z"] + 1)
        else:
            self._add(kind, color, x, y)
        for _ in range(count - 1):
            p = self._last
            self._add(kind, color, p["x"], p["y"], p["z"] + 1)
        what = f"a {color} {spoken(kind)}" if count == 1 else f"a tower of {CARDINAL[count]} {color} {PLURAL[kind]}"
        self._clauses.append(f"{what} {relation} {target}")
        return self

    def _resolve(self, target):
        if target in ("it", "that"):
            return self._last if self._last else self.board.parts[-1]
        _, color, kind = target.split(" ", 2)
        kind = kind.replace(" ", "-")
        pool = self.board.parts
        for part in reversed(pool):
            if part["part"] == kind and part["color"] == color:
                return part
        raise AssertionError(f"no {target}")

    def say(self, text=None, scored=True):
        """Closes the turn; default text joins the clauses."""
        if text is None:
            body = self._clauses[0]
            for clause in self._clauses[1:]:
                body += ", and place " + clause
            text = "Place " + body + "."
        self.turns.append({"text": text, "scored": scored, "adds": self._adds})
        self._clauses, self._adds = [], []
        return self

    def raw(self, text, adds, scored=True):
        for a in adds:
            self._add(*a)
        self.turns.append({"text": text, "scored": scored, "adds": self._adds})
        self._adds = []
        self._clauses = []
        return self


def shape_a():
    s = Script()
    s.single("washer", "magenta", 3, 2).say()
    s.group("row", 2, "washer", "magenta", 4, 2).say()
    s.group("column", 4, "washer", "magenta", 2, 3).say()
    s.group("column", 4, "washer", "magenta", 6, 3).say()
    s.single("washer", "magenta", 3, 5).say()
    s.group("row", 2, "washer", "magenta", 4, 5).say()
    return s


def shape_b():
    s = Script()
    s.group("row", 3, "nut", "blue", 5, 5).say()
    s.single(BRIDGE_X, "red", 5, 5).say()
    s.group("column", 3, "screw", "yellow", 5, 6).say()
    s.relative("washer", "green", "on top of", "the red horizontal bridge")
    s.group("tower", 2, "washer", "green", 7, 5).say()
    return s


def shape_c():
    s = Script()
    s.group("row", 3, "screw", "green", 2, 2).say()
    s.group("column", 2, "screw", "green", 2, 3).say()
    s.group("row", 3, "screw", "green", 2, 5).say()
    return s


def shape_d():
    s = Script()
    s.group("column", 4, "bolt", "red", 9, 2).say()
    s.group("row", 2, "bolt", "blue", 10, 2).group("row", 2, "bolt", "blue", 10, 5).say()
    s.single(BRIDGE_Y, "yellow", 12, 3).say()
    s.relative("gasket", "yellow", "on top of").say()
    return s


def shape_e():
    s = Script()
    s.group("column", 5, "gasket", "purple", 2, 9).say()
    s.group("row", 2, "gasket", "purple", 3, 9).say()
    s.single("nut", "red", 3, 11).relative("nut", "red", "next to").say()
    s.single("screw", "green", 3, 13).say()
    return s


def shape_g():
    s = Script()
    s.group("row", 4, "nut", "yellow", 9, 9).say()
    s.group("column", 4, "nut", "yellow", 9, 10).say()
    s.group("row", 3, "nut", "yellow", 10, 13).say()
    s.group("column", 2, "nut", "yellow", 12, 11).say()
    s.single("washer", "blue", 11, 11).relative("washer", "blue", "on top of", count=3).say()
    return s


def shape_x():
    s = Script()
    for i in range(5):
        s.single("bolt", "blue", 11 + i, 2 + i)
    s.say()
    for x, y in [(15, 2), (14, 3), (12, 5), (11, 6)]:
        s.single("bolt", "red", x, y)
    s.relative("bolt", "green", "on top of", "the blue bolt")
    s.say()
    return s


def shape_plus():
    s = Script()
    s.group("row", 5, "bolt", "magenta", 11, 12).say()
    s.group("column", 2, "bolt", "magenta", 13, 10).say()
    s.group("column", 2, "bolt", "magenta", 13, 13).say()
    return s


def shape_square():
    s = Script()
    s.group("row", 5, "bolt", "blue", 2, 12).say()
    s.group("row", 5, "bolt", "red", 2, 16).say()
    s.group("column", 3, "bolt", "yellow", 2, 13).say()
    s.group("column", 3, "bolt", "green", 6, 13).say()
    return s


def shape_moroccan():
    s = Script()
    s.single("nut", "blue", 2, 2).relative("nut", "blue", "next to").say()
    s.single(BRIDGE_X, "red", 2, 2).say()
    s.group("row", 2, "washer", "yellow", 2, 2).say()
    s.raw("This is what I call a Moroccan Bridge.", [], scored=False)
    bridge = [dict(p) for p in s.board.parts]
    dx = 6 - bridge[0]["x"]
    s.raw("Build another Moroccan Bridge at the 6th column, 2nd row.",
          [(p["part"], p["color"], p["x"] + dx, p["y"], p["z"]) for p in bridge])
    s.single("gasket", "green", 4, 2).single("gasket", "green", 5, 2).say()
    s.single(BRIDGE_X, "purple", 4, 2).say()
    s.relative("screw", "purple", "on top of", count=2).say()
    return s


TASK_III = [
    ("A", shape_a, 14, 6),
    ("B", shape_b, 10, 4),
    ("C", shape_c, 8, 3),
    ("D", shape_d, 10, 4),
    ("E", shape_e, 10, 4),
    ("G", shape_g, 17, 5),
    ("X", shape_x, 10, 2),
    ("Square", shape_square, 16, 4),
    ("+", shape_plus, 9, 3),
    ("Moroccan Bridge", shape_moroccan, 15, 8),
]

# Per-shape instruction-following floor.
TASK_III_FLOOR = {"A": 1.0, "B": 0.75, "C": 1.0, "D": 0.25, "E": 0.75, "G": 1.0, "X": 1.0, "Square": 0.75,
                  "+": 1.0, "Moroccan Bridge": 4 / 7}


def bitmap_turns(s, rows, kind, color, x0, y0, per_turn):
    """Cells of a bitmap, one per turn except where per_turn says two."""
    points = [(x0 + i, y0 + j) for j, row in enumerate(rows) for i, ch in enumerate(row) if ch == "#"]
    k = 0
    for n in per_turn:
        for _ in range(n):
            x, y = points[k]
            s.single(kind, color, x, y)
            k += 1
        s.say()
    assert k == len(points), (k, len(points))
    return len(points)


def recall_turns(s, name, x, y):
    article = "an" if name[0].lower() in "aeiou" else "a"
    s.raw(f"This is what I call {article} {name}.", [], scored=False)
    original = [dict(p) for p in s.board.parts]
    first = original[0]
    dx, dy = x - first["x"], y - first["y"]
    s.raw(f"Build another {name} at the {ordinal(x)} column, {ordinal(y)} row.",
          [(p["part"], p["color"], p["x"] + dx, p["y"] + dy, p["z"]) for p in original])
    return original


def count_bitmap(rows):
    return sum(row.count("#") for row in rows)


SKULL = [
    ".######.",
    "########",
    "##.##.##",
    "#..##..#",
    "########",
    "###..###",
    "########",
    ".######.",
    ".#.##.#.",
    ".######.",
]

FACE = [
    "..####..",
    ".#....#.",
    "#.#..#.#",
    "#.#..#.#",
    "#......#",
    "#..##..#",
    "#......#",
    "#.####.#",
    ".#....#.",
    "..####..",
]

TRIAD = [
    "###.....",
    "##......",
    "#.......",
    "...###..",
    "...##...",
    "...#....",
    "###.....",
    "##......",
    "#.......",
]


def v_a20():
    s = Script()
    s.single("nut", "red", 3, 3).say()
    s.relative("screw", "blue", "on top of").say()
    s.relative("washer", "yellow", "on top of", count=2).say()
    return s, "A20 tower", (8, 8)


def v_c15():
    s = Script()
    s.raw("Can you place a blue screw at row 4 column 5 height 1", [("screw", "blue", 5, 4, 1)])
    s.raw("Place a red screw next to the blue screw, and put a red screw on top.",
          [("screw", "red", 6, 4, 1), ("screw", "red", 6, 4, 2)])
    s.relative("washer", "green", "to the left of", "the blue screw").relative("washer", "green", "on top of").say()
    s.group("row", 2, "gasket", "magenta", 4, 5).say()
    return s, "C15", (9, 8)


def v_d21():
    s = Script()
    s.single(BRIDGE_Y, "purple", 3, 10).say()
    s.relative("bolt", "red", "on top of", count=2).say()
    s.group("row", 3, "nut", "blue", 4, 10).say()
    return s, "D21", (10, 3)


def v_x34():
    s = Script()
    s.single("gasket", "yellow", 12, 3).relative("gasket", "yellow", "in front of").say()
    s.single("gasket", "yellow", 13, 3).say()
    s.single(BRIDGE_X, "green", 12, 3).relative("screw", "red", "on top of").say()
    return s, "X34", (3, 12)


def v_square():
    s = Script()
    ring = [(2, 2), (3, 2), (4, 2), (5, 2), (6, 2), (6, 3), (6, 4), (6, 5), (6, 6), (5, 6), (4, 6), (3, 6), (2, 6),
            (2, 5), (2, 4), (2, 3)]
    k = 0
    for n in [1] * 14 + [2]:
        for _ in range(n):
            s.single("washer", "blue", *ring[k])
            k += 1
        s.say()
    return s, "Square", (10, 10)


def v_triad():
    s = Script()
    assert count_bitmap(TRIAD) == 18
    bitmap_turns(s, TRIAD, "nut", "red", 1, 1, [1] * 12 + [2] * 3)
    return s, "Triad", (10, 2)


def v_face():
    s = Script()
    assert count_bitmap(FACE) == 34
    bitmap_turns(s, FACE, "nut", "blue", 1, 3, [2] * 17)
    # Hair and a nose ridge on the second layer.
    s.group("row", 4, "nut", "blue", 3, 3).say()
    s.group("tower", 2, "nut", "blue", 4, 8).say()
    s.relative("nut", "blue", "on top of", "the blue nut").say()
    s.group("tower", 2, "nut", "blue", 1, 7).say()
    s.group("tower", 2, "nut", "blue", 8, 7).say()
    s.group("tower", 2, "nut", "blue", 3, 12).say()
    return s, "Face", (11, 3)


def v_i():
    s = Script()
    s.group("row", 5, "nut", "blue", 2, 2).say()
    s.group("column", 8, "nut", "blue", 4, 3).say()
    s.group("row", 5, "nut", "blue", 2, 11).say()
    return s, "I", (10, 2)


def v_skull():
    s = Script()
    assert count_bitmap(SKULL) == 62, count_bitmap(SKULL)
    bitmap_turns(s, SKULL, "nut", "blue", 1, 3, [1] * 60 + [2])
    return s, "Skull", (10, 3)


TASK_V = [
    (v_a20, 4, 5),
    (v_c15, 7, 6),
    (v_d21, 6, 5),
    (v_x34, 5, 5),
    (v_square, 16, 17),
    (v_triad, 18, 17),
    (v_face, 47, None),
    (v_i, 18, None),
    (v_skull, 62, 63),
]


def slug(name):
    return {"+": "plus"}.get(name, name.lower().replace(" ", "_"))


def write(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=1, sort_keys=False) + "\n")


def build_task_iii(out):
    for name, fn, parts, instructions in TASK_III:
        s = fn()
        assert len(s.board.parts) == parts, (name, len(s.board.parts))
        assert len(s.turns) == instructions, (name, len(s.turns))
        write(out / "task_iii" / f"{slug(name)}.json",
              {"format": 1, "task": "iii", "name": name, "parts": parts, "floor": TASK_III_FLOOR[name],
               "turns": s.turns})


def build_task_v(out):
    for fn, parts, instructions in TASK_V:
        s, name, (x, y) = fn()
        assert len(s.board.parts) == parts, (name, len(s.board.parts))
        original = recall_turns(s, name, x, y)
        if instructions is not None:
            assert len(s.turns) == instructions, (name, len(s.turns))
        write(out / "task_v" / f"{slug(name)}.json",
              {"format": 1, "task": "v", "name": name, "parts": parts, "original": original,
               "name_turn": len(s.turns) - 2, "recall_turn": len(s.turns) - 1, "turns": s.turns})


APIS = [
    ("create_event", [("q", "title"), ("time", "when")]),
    ("send_email", [("q", "recipient"), ("message", "body")]),
    ("book_flight", [("origin", "city"), ("destination", "city"), ("date", "day")]),
    ("get_weather", [("city", "city"), ("date", "day")]),
    ("search_restaurants", [("cuisine", "food"), ("city", "city"), ("price", "level")]),
    ("convert_currency", [("amount", "number"), ("source", "code"), ("target", "code")]),
    ("translate_text", [("text", "text"), ("target_language", "language")]),
    ("set_reminder", [("message", "text"), ("time", "when")]),
    ("get_stock_price", [("symbol", "ticker"), ("date", "day")]),
    ("order_food", [("restaurant", "name"), ("dish", "dish"), ("quantity", "number")]),
    ("create_playlist", [("name", "title"), ("genre", "genre")]),
    ("track_package", [("carrier", "name"), ("tracking_id", "code")]),
]

VALUES = {
    "title": ["meeting with Alex", "standup", "design review", "dentist", "team lunch", "budget sync"],
    "when": ["tomorrow 3pm", "Mon 9am", "Friday noon", "next Tuesday 10am", "tonight 8pm"],
    "recipient": ["alex@example.com", "sam@example.com", "kim@example.org", "lee@example.net"],
    "body": ["confirmed", "running late", "see attached", "thanks for today"],
    "city": ["Paris", "Lisbon", "Tokyo", "Toronto", "Nairobi", "Lima", "Oslo"],
    "day": ["2024-05-01", "2024-06-12", "2024-07-30", "2024-09-03"],
    "food": ["thai", "italian", "mexican", "ethiopian"],
    "level": ["cheap", "moderate", "expensive"],
    "number": [2, 5, 12, 40, 150],
    "code": ["USD", "EUR", "JPY", "GBP", "1Z999", "TRK42"],
    "text": ["good morning", "where is the station", "call me back"],
    "language": ["French", "Spanish", "German", "Japanese"],
    "ticker": ["ACME", "GLOBX", "INIT"],
    "name": ["Luigi's", "Green Bowl", "UPS", "FedEx", "Road Trip"],
    "dish": ["pad thai", "margherita", "falafel"],
    "genre": ["jazz", "ambient", "rock"],
}


def sample_args(rng, slots, avoid=None):
    while True:
        args = [rng.choice(VALUES[role]) for _, role in slots]
        if args != avoid:
            return args


def build_toolbench(out, seed):
    rng = random.Random(seed)
    cases = []
    for i in range(100):
        k = 1 if i % 3 else 2
        picks = rng.sample(APIS, k)
        workflows, new_info, gold = [], [], []
        for name, slots in picks:
            example = sample_args(rng, slots)
            fresh = sample_args(rng, slots, avoid=example)
            workflows.append({"name": name, "slots": [{"name": n, "role": r} for n, r in slots],
                              "example": example})
            new_info.append({"workflow": name, "bindings": {n: v for (n, _), v in zip(slots, fresh)}})
            gold.append({"name": name, "args": fresh})
        calls = " and ".join(f"{w['name']}({', '.join(json.dumps(a) for a in w['example'])})" for w in workflows)
        cases.append({"id": f"wf{i + 1:03d}", "instruction": f"Complete the request using {calls}.",
                      "workflows": workflows, "new_information": new_info, "gold": gold})
    write(out / "toolbench" / "workflows.json", {"format": 1, "seed": seed, "cases": cases})


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    out = Path(args.out)
    build_task_iii(out)
    build_task_v(out)
    build_toolbench(out, args.seed)


if __name__ == "__main__":
    main()
