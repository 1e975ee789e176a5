"""
Alternating Turing machines: text format, simulation and first-order encoding

Machine files are line based, ``#`` starts a comment::

    state q0 exists initial
    state qa accepting
    symbol _ blank
    symbol a
    trans q0 _ 1 a qa

A move is ``-1`` (left), ``0`` (stay) or ``1`` (right). Runs start on the
empty tape with the head on the first cell.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

from src.logic.formulas import Atom, Eq, Formula, Implies, conj, disj, exists, forall
from src.structures.structure import Structure, Vocabulary
from src.utils.errors import FormatError, StuckUniversal, UnsupportedAlternation

logger = logging.getLogger(__name__)

MOVES = (-1, 0, 1)

STATE, ALPHABET, HEAD, INITIAL, ACCEPTING = "ST", "AL", "H", "IN", "ACC"
RIGHT, LEFT, STAY = "R", "L", "S"
BLANK, HEAD_BLANK, HEAD_OF = "BLANK", "HBLANK", "HD"
EXISTENTIAL, UNIVERSAL = "F", "U"


@dataclass(frozen=True)
class ATMachine:
    """
    Alternating machine with a single accepting state

    Args:
        states (tuple): State names, in declaration order
        universal (frozenset): Universal states; the rest are existential
        initial (str): Initial state, existential
        accepting (str): Accepting state, counted as both kinds
        symbols (tuple): Tape alphabet, in declaration order
        blank (str): Blank symbol
        transitions (tuple): ``(q, a, move, b, q')`` entries
    """

    states: tuple
    universal: frozenset
    initial: str
    accepting: str
    symbols: tuple
    blank: str
    transitions: tuple

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise FormatError("state declared twice")
        if len(set(self.symbols)) != len(self.symbols):
            raise FormatError("symbol declared twice")
        if self.initial not in self.states or self.accepting not in self.states:
            raise FormatError("initial and accepting states must be declared")
        if self.blank not in self.symbols:
            raise FormatError(f"blank symbol {self.blank!r} is not in the alphabet")
        if self.initial in self.universal and self.initial != self.accepting:
            raise FormatError("the initial state must be existential")
        for q, a, move, b, p in self.transitions:
            if q not in self.states or p not in self.states:
                raise FormatError(f"transition {q} {a} {move} {b} {p} names an undeclared state")
            if a not in self.symbols or b not in self.symbols:
                raise FormatError(f"transition {q} {a} {move} {b} {p} names an undeclared symbol")
            if move not in MOVES:
                raise FormatError(f"move must be -1, 0 or 1, got {move}")

    def is_universal(self, q: str) -> bool:
        return q in self.universal and q != self.accepting

    def moves_from(self, q: str, a: str) -> list:
        """Transitions applicable in state q reading a; none leave the accepting state."""
        if q == self.accepting:
            return []
        return [(move, b, p) for (q0, a0, move, b, p) in self.transitions if q0 == q and a0 == a]


def load_atm(text: str) -> ATMachine:
    """
    Parse the machine text format

    Raises:
        FormatError: Malformed line, missing initial/accepting/blank
    """
    states, universal = [], set()
    initial = accepting = blank = None
    symbols, transitions = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        keyword, args = parts[0], parts[1:]
        if keyword == "state":
            if not args:
                raise FormatError("expected 'state <name> [exists|forall] [initial] [accepting]'", lineno)
            name, flags = args[0], args[1:]
            unknown = set(flags) - {"exists", "forall", "initial", "accepting"}
            if unknown:
                raise FormatError(f"unknown state flags {sorted(unknown)}", lineno)
            states.append(name)
            if "forall" in flags:
                universal.add(name)
            if "initial" in flags:
                if initial is not None:
                    raise FormatError("more than one initial state", lineno)
                initial = name
            if "accepting" in flags:
                if accepting is not None:
                    raise FormatError("more than one accepting state", lineno)
                accepting = name
        elif keyword == "symbol":
            if not args or len(args) > 2 or (len(args) == 2 and args[1] != "blank"):
                raise FormatError("expected 'symbol <s> [blank]'", lineno)
            symbols.append(args[0])
            if len(args) == 2:
                if blank is not None:
                    raise FormatError("more than one blank symbol", lineno)
                blank = args[0]
        elif keyword == "trans":
            if len(args) != 5:
                raise FormatError("expected 'trans <q> <a> <move> <b> <q'>'", lineno)
            try:
                move = int(args[2])
            except ValueError:
                raise FormatError(f"move must be an integer, got {args[2]!r}", lineno) from None
            transitions.append((args[0], args[1], move, args[3], args[4]))
        else:
            raise FormatError(f"unknown line type {keyword!r}", lineno)
    if initial is None or accepting is None:
        raise FormatError("machine needs an initial and an accepting state")
    if blank is None:
        raise FormatError("machine needs a blank symbol")
    return ATMachine(tuple(states), frozenset(universal), initial, accepting,
                     tuple(symbols), blank, tuple(transitions))


def dump_atm(machine: ATMachine) -> str:
    lines = []
    for q in machine.states:
        flags = ["forall" if q in machine.universal else "exists"]
        if q == machine.initial:
            flags.append("initial")
        if q == machine.accepting:
            flags.append("accepting")
        lines.append(f"state {q} {' '.join(flags)}")
    for a in machine.symbols:
        lines.append(f"symbol {a} blank" if a == machine.blank else f"symbol {a}")
    for q, a, move, b, p in machine.transitions:
        lines.append(f"trans {q} {a} {move} {b} {p}")
    return "\n".join(lines) + "\n"


def read_atm(path) -> ATMachine:
    with open(path, "r", encoding="utf-8") as f:
        return load_atm(f.read())


def simulate_atm(machine: ATMachine, k: int, t: int) -> bool:
    """
    Does the machine accept the empty word within k transitions and t alternations?

    Game-tree search over configurations on a window of ``k + 1`` cells;
    moves that would leave the window have no successor. Existential
    configurations need one accepting successor, universal ones all of them.
    Runs start existential; every change of state kind along a path opens a
    new phase, and a path needing more than t phases rejects.

    Args:
        machine (ATMachine): The machine
        k (int): Largest number of transitions
        t (int): Largest number of phases

    Returns:
        bool: Acceptance

    Raises:
        StuckUniversal: A reachable universal configuration has no successor
    """
    width = k + 1

    @lru_cache(maxsize=None)
    def accepts(state, head, tape, budget, phase, kind):
        if state == machine.accepting:
            return True
        now = UNIVERSAL if machine.is_universal(state) else EXISTENTIAL
        if now != kind:
            phase += 1
        if phase > t or budget == 0:
            return False
        successors = []
        for move, b, p in machine.moves_from(state, tape[head]):
            target = head + move
            if 0 <= target < width:
                successors.append((p, target, tape[:head] + (b,) + tape[head + 1:]))
        if now == UNIVERSAL:
            if not successors:
                raise StuckUniversal(f"universal state {state} has no move on {tape[head]!r} at cell {head + 1}")
            return all(accepts(p, h, tp, budget - 1, phase, now) for p, h, tp in successors)
        return any(accepts(p, h, tp, budget - 1, phase, now) for p, h, tp in successors)

    return accepts(machine.initial, 0, (machine.blank,) * width, k, 1, EXISTENTIAL)


@dataclass(frozen=True)
class MachineStructure:
    """A_M together with the element of every state, symbol and head symbol."""

    structure: Structure
    state: dict
    symbol: dict
    head: dict


def machine_structure(machine: ATMachine, t: int = 1) -> MachineStructure:
    """
    A_M: states, then symbols, then head symbols

    Args:
        machine (ATMachine): The machine
        t (int, optional): 2 adds the state-kind relations F and U

    Returns:
        MachineStructure: The structure and its element maps
    """
    state = {q: i for i, q in enumerate(machine.states)}
    offset = len(state)
    symbol = {a: offset + i for i, a in enumerate(machine.symbols)}
    offset += len(symbol)
    head = {a: offset + i for i, a in enumerate(machine.symbols)}
    n = offset + len(head)
    rows = {
        STATE: [(e,) for e in state.values()],
        ALPHABET: [(e,) for e in symbol.values()],
        HEAD: [(e,) for e in head.values()],
        INITIAL: [(state[machine.initial],)],
        ACCEPTING: [(state[machine.accepting],)],
        RIGHT: [], LEFT: [], STAY: [],
        BLANK: [(symbol[machine.blank],)],
        HEAD_BLANK: [(head[machine.blank],)],
        HEAD_OF: [(symbol[a], head[a]) for a in machine.symbols],
    }
    for q, a, move, b, p in machine.transitions:
        if q == machine.accepting:
            continue
        if move == 0:
            rows[STAY].append((state[q], head[a], head[b], state[p]))
        else:
            rows[RIGHT if move == 1 else LEFT].append((state[q], head[a], symbol[b], state[p]))
    acc = state[machine.accepting]
    rows[STAY].extend((acc, head[a], head[a], acc) for a in machine.symbols)
    pairs = [(STATE, 1), (ALPHABET, 1), (HEAD, 1), (INITIAL, 1), (ACCEPTING, 1),
             (RIGHT, 4), (LEFT, 4), (STAY, 4), (BLANK, 1), (HEAD_BLANK, 1), (HEAD_OF, 2)]
    if t == 2:
        pairs += [(EXISTENTIAL, 1), (UNIVERSAL, 1)]
        rows[EXISTENTIAL] = [(state[q],) for q in machine.states
                             if not machine.is_universal(q)]
        rows[UNIVERSAL] = [(state[q],) for q in machine.states
                           if q in machine.universal or q == machine.accepting]
    provenance = {}
    provenance.update({e: q for q, e in state.items()})
    provenance.update({e: a for a, e in symbol.items()})
    provenance.update({e: f"{a}_H" for a, e in head.items()})
    structure = Structure(Vocabulary.of(*pairs), n, rows, provenance)
    return MachineStructure(structure, state, symbol, head)


def config_variables(index: int, width: int):
    """State variable and cell variables of the index-th configuration block."""
    return f"x{index}", [f"y{index}_{j}" for j in range(1, width + 1)]


def start_formula(x, ys) -> Formula:
    """Initial state, head on the first cell, empty tape."""
    return conj([Atom(INITIAL, (x,)), Atom(HEAD_BLANK, (ys[0],))] + [Atom(BLANK, (y,)) for y in ys[1:]])


def step_formula(x, ys, x2, ys2) -> Formula:
    """
    ``(x2, ys2)`` is a successor of ``(x, ys)``

    One disjunct per head cell and direction; cells the transition does not
    touch keep their content.
    """
    width = len(ys)
    options = []
    for i in range(width):
        stay = [Atom(STAY, (x, ys[i], ys2[i], x2))]
        options.append(conj(stay + _unchanged(ys, ys2, {i})))
        if i + 1 < width:
            right = [Atom(RIGHT, (x, ys[i], ys2[i], x2)), Atom(HEAD_OF, (ys[i + 1], ys2[i + 1]))]
            options.append(conj(right + _unchanged(ys, ys2, {i, i + 1})))
        if i > 0:
            left = [Atom(LEFT, (x, ys[i], ys2[i], x2)), Atom(HEAD_OF, (ys[i - 1], ys2[i - 1]))]
            options.append(conj(left + _unchanged(ys, ys2, {i, i - 1})))
    return disj(options)


def _unchanged(ys, ys2, touched):
    return [Eq(a, b) for j, (a, b) in enumerate(zip(ys, ys2)) if j not in touched]


def run_formula(k: int) -> Formula:
    """
    Existential sentence: k configuration blocks from the start, consecutive
    ones related by a step, the last accepting
    """
    blocks = [config_variables(i, k) for i in range(1, k + 1)]
    parts = [start_formula(*blocks[0])]
    parts += [step_formula(*blocks[i], *blocks[i + 1]) for i in range(k - 1)]
    parts.append(Atom(ACCEPTING, (blocks[-1][0],)))
    names = [v for x, ys in blocks for v in [x] + ys]
    return exists(names, conj(parts))


def alternating_run_formula(k: int) -> Formula:
    """
    Sigma_2 sentence over A_M with F and U

    For some l <= k: an existential run of l blocks whose last state is
    universal, such that every universal continuation up to block k stays
    universal at every block it reaches and ends accepting. A continuation
    that reaches an existential state fails there, even when it cannot move on.
    """
    blocks = [config_variables(i, k) for i in range(1, k + 1)]
    options = []
    for l in range(1, k + 1):
        head = [start_formula(*blocks[0])]
        head += [step_formula(*blocks[i], *blocks[i + 1]) for i in range(l - 1)]
        head += [Atom(EXISTENTIAL, (blocks[i][0],)) for i in range(l - 1)]
        head.append(Atom(UNIVERSAL, (blocks[l - 1][0],)))
        # steps[m] leads from block l + m to block l + m + 1 (1-based)
        steps = [step_formula(*blocks[i], *blocks[i + 1]) for i in range(l - 1, k - 1)]
        tail = [Implies(conj(steps[:m + 1]), Atom(UNIVERSAL, (blocks[l + m][0],))) for m in range(len(steps))]
        accepting = Atom(ACCEPTING, (blocks[-1][0],))
        tail.append(Implies(conj(steps), accepting) if steps else accepting)
        later = [v for x, ys in blocks[l:] for v in [x] + ys]
        earlier = [v for x, ys in blocks[:l] for v in [x] + ys]
        options.append(exists(earlier, conj(head + [forall(later, conj(tail))])))
    return disj(options)


def atm_encode(machine: ATMachine, k: int, t: int = 1):
    """
    ``(A_M, phi_k)`` with ``A_M |= phi_k`` exactly when the machine accepts
    within ``k - 1`` transitions (and at most t phases)

    Args:
        machine (ATMachine): The machine
        k (int): Number of configuration blocks, at least 1
        t (int, optional): 1 (existential runs) or 2

    Returns:
        tuple: ``(Structure, Formula)``

    Raises:
        UnsupportedAlternation: t outside {1, 2}, or t = 1 with universal states
    """
    if t not in (1, 2):
        raise UnsupportedAlternation(f"encodings exist for t = 1 and t = 2, got t={t}")
    if k < 1:
        raise ValueError(f"need at least one configuration block, got k={k}")
    if t == 1 and any(machine.is_universal(q) for q in machine.states):
        raise UnsupportedAlternation("machine has universal states; encode it with t = 2")
    encoded = machine_structure(machine, t)
    phi = run_formula(k) if t == 1 else alternating_run_formula(k)
    logger.debug(f"Encoded machine: |A_M| = {encoded.structure.n}, {k} configuration blocks, t={t}")
    return encoded.structure, phi

