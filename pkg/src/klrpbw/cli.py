"""Command-line front end.

Exit status: 0 success, 1 a requested check failed, 2 usage error or malformed
input, 3 computation budget exceeded.  JSON output is deterministic (sorted keys,
rows in a fixed order).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from . import checks
from .chevalley import UnsupportedType, chevalley_check, fold, fold_check, is_simply_laced
from .klr import (BudgetExceeded, FiniteModule, KLRAlgebra, ModuleShapeError, ParseError, element_to_json,
                  format_element, induce, normal_form, verify_module)
from .klr.modules import DEFAULT_MAX_DIM
from .klr.algebra import DEFAULT_MAX_LETTERS
from .pbw import CuspidalTable, build_table, costandard_character, standard_character
from .rootsys import (CartanDatum, CartanError, ConvexOrder, ReducedWordError, convex_order, height,
                      hmm_order, kostant_partition, kp_vectors, minimal_pairs, named_type,
                      default_minimal_pair)
from .shuffle import ShuffleElement, expand_in_dual_pbw, format_word, gram_matrix, restrict

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

BUDGET_ENV = {"max_dim": "KLRPBW_MAX_DIM", "max_letters": "KLRPBW_MAX_LETTERS",
              "max_height": "KLRPBW_MAX_HEIGHT"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    cartan: CartanDatum
    type_name: str
    word: tuple[int, ...] | str = "hmm"
    max_dim: int = DEFAULT_MAX_DIM
    max_letters: int = DEFAULT_MAX_LETTERS
    max_height: int | None = None
    output: Path | None = None
    characteristic: int = 0
    seed: int = 0
    use_cache: bool = True
    fmt: str = "text"
    label_order: tuple[int, ...] | None = None
    extra: dict = field(default_factory=dict)

    def order(self) -> tuple[ConvexOrder, dict | None]:
        if self.word == "hmm":
            return hmm_order(self.cartan)
        try:
            return convex_order(self.cartan, self.word), None
        except ReducedWordError as exc:
            raise UsageError(f"--word: {exc}") from exc

    def table(self, order: ConvexOrder) -> CuspidalTable:
        return build_table(order, use_cache=self.use_cache, label=self.type_name or "custom",
                           max_height=self.max_height)


# -- parsing helpers -------------------------------------------------------------

def _ints(text: str, what: str) -> tuple[int, ...]:
    text = text.strip()
    try:
        if "," in text or " " in text:
            return tuple(int(x) for x in text.replace(",", " ").split())
        return tuple(int(c) for c in text)
    except ValueError:
        raise UsageError(f"{what}: expected integers, got {text!r}") from None


def _vector(text: str, what: str, length: int) -> tuple[int, ...]:
    v = _ints(text, what)
    if len(v) != length:
        raise UsageError(f"{what}: expected {length} entries, got {len(v)}")
    if any(x < 0 for x in v):
        raise UsageError(f"{what}: entries must be non-negative")
    return v


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def _env_int(name: str) -> int | None:
    val = os.environ.get(name)
    if val is None or val == "":
        return None
    try:
        return int(val)
    except ValueError:
        raise UsageError(f"environment variable {name} must be an integer") from None


def load_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, TOML config, budget env vars and command-line flags (in that order)."""
    data: dict = {}
    if getattr(args, "config", None):
        try:
            data = tomllib.loads(Path(args.config).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {args.config}: {exc.strerror}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise UsageError(f"{args.config}: {exc}") from exc
    cart = data.get("cartan", {})
    budgets = data.get("budgets", {})
    type_name = args.type or cart.get("type")
    try:
        if type_name:
            C = named_type(type_name)
            type_name = type_name.strip().upper()
        elif "pairing" in cart:
            C = CartanDatum(tuple(tuple(r) for r in cart["pairing"]), cart.get("name", ""))
            type_name = cart.get("name", "")
        else:
            raise UsageError("a Cartan datum is required: --type or [cartan] in --config")
    except (CartanError, TypeError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"invalid Cartan datum: {exc}") from exc

    word_src = args.word if args.word is not None else cart.get("reduced_word", "hmm")
    if isinstance(word_src, str) and word_src.strip().lower() == "hmm":
        word: tuple[int, ...] | str = "hmm"
    elif isinstance(word_src, list):
        word = tuple(int(x) for x in word_src)
    else:
        word = _ints(str(word_src), "--word")
    if word != "hmm" and any(not 0 <= x < C.rank for x in word):
        raise UsageError(f"--word: letters must lie in 0..{C.rank - 1}")

    cfg = RunConfig(C, type_name or "", word)
    for key in ("max_dim", "max_letters", "max_height"):
        val = budgets.get(key)
        env = _env_int(BUDGET_ENV[key])
        if env is not None:
            val = env
        flag = getattr(args, key, None)
        if flag is not None:
            val = flag
        if val is not None:
            if int(val) <= 0:
                raise UsageError(f"{key} must be positive")
            setattr(cfg, key, int(val))
    out = args.output or data.get("output", {}).get("path")
    cfg.output = Path(out) if out else None
    char = args.characteristic if args.characteristic is not None else data.get("field", {}).get("characteristic", 0)
    if char and (char < 2 or any(char % d == 0 for d in range(2, int(char ** 0.5) + 1))):
        raise UsageError(f"characteristic must be 0 or a prime, got {char}")
    cfg.characteristic = int(char)
    cfg.seed = args.seed
    cfg.use_cache = not args.no_cache
    cfg.fmt = args.format
    lo = getattr(args, "label_order", None)
    if lo:
        lo = _ints(lo, "--label-order")
        if sorted(lo) != list(range(C.rank)):
            raise UsageError("--label-order must be a permutation of the labels")
        cfg.label_order = lo
    return cfg


# -- rendering --------------------------------------------------------------------

def _root(a: Sequence[int]) -> list[int]:
    return list(a)


def _word(w: Sequence[int]) -> str:
    return format_word(w)


def _character_rows(x: ShuffleElement) -> list[dict]:
    return [{"word": _word(w), "coefficient": c.to_json()} for w, c in x.items()]


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# -- commands ----------------------------------------------------------------------
# Each returns (payload, text, ok).

def cmd_roots(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    C = cfg.cartan
    rows = [{"root": _root(a), "height": height(a)} for a in sorted(C.positive_roots, key=lambda a: (height(a), a))]
    text = "\n".join(f"{r['root']}  height {r['height']}" for r in rows)
    return {"type": cfg.type_name, "pairing": [list(r) for r in C.pairing], "roots": rows}, text, True


def cmd_convex_order(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    order, words = cfg.order()
    rows = []
    for k, a in enumerate(order.roots):
        row = {"position": k + 1, "root": _root(a)}
        if words is not None:
            row["good_word"] = _word(words[a])
        rows.append(row)
    lines = [f"reduced word: {','.join(map(str, order.word))}"]
    lines += [f"{r['position']:3d}  {r['root']}" + (f"  {r['good_word']}" if "good_word" in r else "") for r in rows]
    return {"type": cfg.type_name, "word": list(order.word), "order": rows}, "\n".join(lines), True


def cmd_kp(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    nu = _vector(args.nu, "--nu", cfg.cartan.rank)
    n = kostant_partition(cfg.cartan, nu)
    return {"nu": list(nu), "kostant_partition": n}, str(n), True


def cmd_minimal_pairs(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    order, words = cfg.order()
    targets = [_vector(args.root, "--root", cfg.cartan.rank)] if args.root else \
        sorted((a for a in order.roots if height(a) > 1), key=lambda a: (height(a), order.index(a)))
    rows, lines = [], []
    for a in targets:
        if a not in order.position:
            raise UsageError(f"{list(a)} is not a positive root")
        if height(a) == 1:
            raise UsageError(f"{list(a)} is simple; minimal pairs need a non-simple root")
        pairs = minimal_pairs(order, a)
        dflt = default_minimal_pair(order, a)
        row = {"root": _root(a), "pairs": [{"beta": _root(b), "gamma": _root(g)} for b, g in pairs],
               "default": {"beta": _root(dflt[0]), "gamma": _root(dflt[1])}}
        if words is not None:
            row["good_word"] = _word(words[a])
            row["default"]["beta_word"] = _word(words[dflt[0]])
            row["default"]["gamma_word"] = _word(words[dflt[1]])
        rows.append(row)
        label = row.get("good_word", str(list(a)))
        lines.append(f"{label}: " + "; ".join(
            f"({_word(words[b]) if words else list(b)}, {_word(words[g]) if words else list(g)})"
            for b, g in pairs))
    return {"type": cfg.type_name, "word": list(order.word), "rows": rows}, "\n".join(lines), True


def _require_height(cfg: RunConfig, h: int):
    if cfg.max_height is not None and h > cfg.max_height:
        raise BudgetExceeded(f"height {h} exceeds max_height {cfg.max_height}")


def cmd_cuspidal(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    order, words = cfg.order()
    table = cfg.table(order)
    roots = sorted(order.roots, key=lambda a: (height(a), order.index(a)))
    if args.root:
        a = _vector(args.root, "--root", cfg.cartan.rank)
        if a not in order.position:
            raise UsageError(f"{list(a)} is not a positive root")
        _require_height(cfg, height(a))
        roots = [a]
    elif cfg.max_height is not None:
        roots = [a for a in roots if height(a) <= cfg.max_height]
    rows, lines = [], []
    for a in roots:
        x = table.get(a)
        row = {"root": _root(a), "height": height(a), "position": order.index(a) + 1,
               "character": _character_rows(x)}
        if words is not None:
            row["good_word"] = _word(words[a])
        if height(a) > 1:
            b, g = default_minimal_pair(order, a)
            row["pair"] = {"beta": _root(b), "gamma": _root(g)}
        rows.append(row)
        lines.append(f"{row.get('good_word', str(list(a))):<12} {x}")
    payload = {"type": cfg.type_name, "word": list(order.word), "rows": rows}
    return payload, "\n".join(lines), True


def _m_vector(cfg: RunConfig, order: ConvexOrder, text: str) -> tuple[int, ...]:
    return _vector(text, "--m", len(order))


def cmd_standard(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    order, _ = cfg.order()
    table = cfg.table(order)
    m = _m_vector(cfg, order, args.m)
    x = costandard_character(order, m, table) if args.costandard else standard_character(order, m, table)
    kind = "costandard" if args.costandard else "standard"
    return {"kind": kind, "m": list(m), "character": x.to_json()}, str(x), True


def _load_character(cfg: RunConfig, args, order, table) -> ShuffleElement:
    if args.char:
        data = _read_json(args.char)
        if isinstance(data, dict) and "character" in data:
            data = data["character"]
        try:
            return ShuffleElement.from_json(data, cfg.cartan.rank)
        except (TypeError, ValueError, KeyError, AttributeError) as exc:
            raise UsageError(f"{args.char}: malformed character ({exc})") from exc
    if args.m:
        m = _m_vector(cfg, order, args.m)
        return costandard_character(order, m, table) if args.costandard else standard_character(order, m, table)
    raise UsageError("give --char FILE or --m")


def cmd_restrict(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    order, _ = cfg.order()
    table = cfg.table(order)
    x = _load_character(cfg, args, order, table)
    r = cfg.cartan.rank
    parts = [_vector(p, "--parts", r) for p in args.parts.split(";")] if args.parts else \
        [_vector(args.lam, "--lam", r), _vector(args.mu, "--mu", r)]
    if x and tuple(map(sum, zip(*parts))) != x.weight(r):
        raise UsageError("the parts do not add up to the weight of the character")
    res = restrict(x, parts)
    rows = [{"words": [_word(w) for w in key], "coefficient": c.to_json()} for key, c in sorted(res.items())]
    text = "\n".join(f"{' | '.join(_word(w) for w in key)}: {c}" for key, c in sorted(res.items())) or "0"
    return {"parts": [list(p) for p in parts], "terms": rows}, text, True


def cmd_gram(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    nu = _vector(args.nu, "--nu", cfg.cartan.rank)
    if sum(nu) == 0:
        raise UsageError("--nu must be nonzero")
    _require_height(cfg, sum(nu))
    words, P = gram_matrix(cfg.cartan, nu)
    scal = " ".join(f"(1 - q^{cfg.cartan.pairing[i][i]})^-{n}" for i, n in enumerate(nu) if n)
    lines = [f"scalar {scal}", "words " + " ".join(_word(w) for w in words)]
    lines += [_word(w) + ": " + ", ".join(str(c) for c in row) for w, row in zip(words, P)]
    payload = {"nu": list(nu), "words": [_word(w) for w in words],
               "matrix": [[c.to_json() for c in row] for row in P],
               "scalar_denominator": [[cfg.cartan.pairing[i][i], n] for i, n in enumerate(nu)]}
    return payload, "\n".join(lines), True


def cmd_expand(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    order, _ = cfg.order()
    table = cfg.table(order)
    x = _load_character(cfg, args, order, table)
    try:
        exp = expand_in_dual_pbw(cfg.cartan, x, order, table)
    except ArithmeticError as exc:
        return {"ok": False, "error": str(exc)}, f"FAIL {exc}", False
    rows = [{"m": list(m), "coefficient": c.to_json()} for m, c in sorted(exp.items())]
    text = "\n".join(f"{list(m)}: {c}" for m, c in sorted(exp.items())) or "0"
    return {"ok": True, "terms": rows}, text, True


def _load_module(path: str) -> FiniteModule:
    try:
        return FiniteModule.from_json(_read_json(path))
    except ModuleShapeError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _algebra(cfg: RunConfig) -> KLRAlgebra:
    return KLRAlgebra(cfg.cartan, label_order=cfg.label_order, max_letters=cfg.max_letters)


def cmd_verify_module(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    M = _load_module(args.file)
    alg = _algebra(cfg)
    alg._check_size(M.n)
    v = verify_module(alg, M, characteristic=cfg.characteristic)
    payload = v.to_json()
    payload["dim"] = M.dim
    payload["characteristic"] = cfg.characteristic
    if v.ok:
        text = f"PASS verify-module dim {M.dim}"
    else:
        errs = v.shape_errors + [f"{e['relation']} on basis {e['basis']}" for e in v.relation_errors]
        text = "FAIL verify-module\n" + "\n".join(errs)
    return payload, text, v.ok


def cmd_induce(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    M, N = _load_module(args.file_a), _load_module(args.file_b)
    alg = _algebra(cfg)
    for X in (M, N):
        v = verify_module(alg, X, cfg.characteristic)
        if v.shape_errors:
            raise UsageError("input module: " + "; ".join(v.shape_errors))
    alg._check_size(M.n + N.n)
    X = induce(alg, M, N, max_dim=cfg.max_dim)
    ch = X.character(cfg.cartan.rank)
    return {"module": X.to_json(), "character": ch.to_json()}, f"dim {X.dim}\ncharacter {ch}", True


def cmd_nf(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    alg = _algebra(cfg)
    try:
        x = normal_form(alg, args.expression)
    except ParseError as exc:
        raise UsageError(f"cannot parse expression: {exc}") from exc
    return {"expression": args.expression, "label_order": list(alg.label_order),
            "normal_form": element_to_json(alg, x)}, format_element(alg, x), True


def cmd_chevalley_check(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    order, _ = cfg.order()
    table = cfg.table(order)
    rep = chevalley_check(order, table, max_height=cfg.max_height)
    payload = {"ok": rep.ok, "rows": rep.rows,
               "signs": [{"root": _root(a), "sign": s} for a, s in sorted(rep.signs.items())]}
    lines = [f"{'word':<12} {'q=1 char':>9} {'z_pairing':>10}  match"]
    lines += [f"{_word(r['word']):<12} {r['character_q1']:>9} {r['z_pairing']:>10}  {'yes' if r['match'] else 'NO'}"
              for r in rep.rows]
    ok = rep.ok
    if not is_simply_laced(cfg.cartan):
        try:
            F = fold(cfg.cartan)
        except UnsupportedType as exc:
            payload["fold"] = {"skipped": str(exc)}
        else:
            from .shuffle import words_of_weight
            fold_rows = []
            for a in order.roots:
                if cfg.max_height is not None and height(a) > cfg.max_height:
                    continue
                for w in words_of_weight(a):
                    fv = fold_check(order, a, w, F)
                    fold_rows.append({"root": _root(a), "word": _word(w), "value": fv.value, "ok": fv.ok,
                                      "summands": {_word(k): s for k, s in sorted(fv.summands.items())},
                                      "failures": fv.failures})
                    ok = ok and fv.ok
            payload["fold"] = {"ambient": F.ambient.name, "orbits": [list(o) for o in F.orbits], "rows": fold_rows}
            n_ok = sum(r["ok"] for r in fold_rows)
            lines.append(f"folding from {F.ambient.name}: {n_ok}/{len(fold_rows)} positive summand-by-summand")
    payload["ok"] = ok
    lines.append("PASS" if ok else "FAIL")
    return payload, "\n".join(lines), ok


def cmd_selftest(cfg: RunConfig, args) -> tuple[dict, str, bool]:
    order, _ = cfg.order()
    table = cfg.table(order)
    verdicts = checks.run_selftest(order, table, quick=args.quick, seed=cfg.seed)
    rows = [{"check": v.name, "ok": v.ok, "failures": v.failures} for v in verdicts]
    ok = all(v.ok for v in verdicts)
    lines = [f"{'PASS' if v.ok else 'FAIL'} {v.name}" + (f": {v.failures[0]}" if v.failures else "")
             for v in verdicts]
    return {"ok": ok, "type": cfg.type_name, "seed": cfg.seed, "checks": rows}, "\n".join(lines), ok


COMMANDS = {
    "roots": cmd_roots,
    "convex-order": cmd_convex_order,
    "kp": cmd_kp,
    "minimal-pairs": cmd_minimal_pairs,
    "cuspidal": cmd_cuspidal,
    "standard": cmd_standard,
    "restrict": cmd_restrict,
    "gram": cmd_gram,
    "expand": cmd_expand,
    "verify-module": cmd_verify_module,
    "induce": cmd_induce,
    "nf": cmd_nf,
    "chevalley-check": cmd_chevalley_check,
    "selftest": cmd_selftest,
}


# -- argument parser --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--type", help="named Cartan type, e.g. A2, B3, G2, F4")
    common.add_argument("--config", help="TOML run configuration")
    common.add_argument("--word", help="reduced word for w0 (e.g. 0,1,0,1) or 'hmm' (default)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", help="also write the JSON result to this path")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps (printed)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the table cache")
    common.add_argument("--max-dim", type=int, dest="max_dim")
    common.add_argument("--max-letters", type=int, dest="max_letters")
    common.add_argument("--max-height", type=int, dest="max_height")
    common.add_argument("--characteristic", type=int, help="ground field characteristic (0 or prime)")

    p = _Parser(prog="klrpbw", description="Convex orders, cuspidal characters and KLR algebras.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    add("roots", "positive roots")
    add("convex-order", "convex order of a reduced word")
    add("kp", "Kostant partition count").add_argument("--nu", required=True)
    add("minimal-pairs", "minimal pairs of non-simple roots").add_argument("--root")
    add("cuspidal", "cuspidal characters").add_argument("--root")
    s = add("standard", "(co)standard character")
    s.add_argument("--m", required=True, help="root multiplicities in convex-order position")
    s.add_argument("--costandard", action="store_true")
    for name, help_ in (("restrict", "restriction of a character"), ("expand", "dual PBW expansion")):
        s = add(name, help_)
        s.add_argument("--char", help="character JSON file")
        s.add_argument("--m", help="use the (co)standard character of m")
        s.add_argument("--costandard", action="store_true")
        if name == "restrict":
            s.add_argument("--lam")
            s.add_argument("--mu")
            s.add_argument("--parts", help="weights separated by ';'")
    add("gram", "Gram matrix of the monomial basis").add_argument("--nu", required=True)
    add("verify-module", "check the defining relations on a module").add_argument("file")
    s = add("induce", "vector-level induction")
    s.add_argument("file_a")
    s.add_argument("file_b")
    for name in ("verify-module", "induce"):
        sub.choices[name].add_argument("--label-order", dest="label_order")
    s = add("nf", "normal form of a generator expression")
    s.add_argument("expression")
    s.add_argument("--label-order", dest="label_order")
    add("chevalley-check", "q = 1 cross-route table")
    add("selftest", "run the checks for one type").add_argument("--quick", action="store_true")
    return p


def _emit(cfg: RunConfig | None, payload: dict, text: str, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(dumps(payload) + "\n")
    elif text:
        out.write(text + "\n")
    if cfg is not None and cfg.output is not None:
        cfg.output.parent.mkdir(parents=True, exist_ok=True)
        cfg.output.write_text(dumps(payload) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    fmt = "json" if "--format=json" in argv or ("--format" in argv and "json" in argv) else "text"
    cfg = None
    try:
        args = parser.parse_args(argv)
        fmt = args.format
        cfg = load_config(args)
        if args.command == "selftest" or cfg.seed:
            print(f"seed {cfg.seed}", file=sys.stderr)
        payload, text, ok = COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        _emit(None, {"ok": False, "error": "usage", "message": str(exc)}, f"error: {exc}", fmt, sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        _emit(None, {"ok": False, "error": "budget", "message": str(exc)}, f"budget exceeded: {exc}", fmt, sys.stderr)
        return EXIT_BUDGET
    _emit(cfg, payload, text, fmt)
    if not ok:
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
