"""Command line front end: ``ecdescent --family congruent:157 --mode eight``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .descent import Descent, DescentError, ModelMap, isogeny_shift_variants, naive_height
from .families import parse_family
from .forms import Curve
from .report import CheckpointError, fraction_str, read_checkpoint, render_structured, render_text, write_checkpoint
from .search import SearchBounds

log = logging.getLogger("ecdescent")

EXIT_FOUND = 0
EXIT_EXHAUSTED = 1
EXIT_USAGE = 2
EXIT_BAD_TORSION = 3
EXIT_CHECKPOINT = 4
EXIT_INTERNAL = 5


class UsageError(Exception):
    def __init__(self, message: str, status: int = EXIT_USAGE):
        super().__init__(message)
        self.status = status


@dataclass
class RunConfig:
    curve: Curve
    source: str
    bounds: SearchBounds = field(default_factory=SearchBounds)
    mode: str = "eight"
    torsion_x: list[Fraction] = field(default_factory=list)
    forced_d: int | None = None
    use_isogenous: bool = False
    shift_variants: bool = False
    factor_hints: list[int] = field(default_factory=list)
    checkpoint: str | None = None
    resume: bool = False
    workers: int = 1
    output: str = "text"

    def models(self) -> list[tuple[Curve, ModelMap]]:
        models = [(self.curve.isogenous(), ModelMap("dual"))] if self.use_isogenous else [(self.curve, ModelMap())]
        if self.shift_variants:
            models += isogeny_shift_variants(self.curve)[1:]
        return models

    def identity(self) -> dict:
        """The fields that determine the search result (used for reports and checkpoint matching)."""
        b = self.bounds
        return {
            "curve": {"a": str(self.curve.a), "b": str(self.curve.b)},
            "source": self.source,
            "bounds": {"s1a": b.s1a, "s1b": b.s1b, "s2a": b.s2a, "s2b": b.s2b, "s3b": b.s3b, "s4b": b.s4b},
            "mode": self.mode,
            "torsion_x": [fraction_str(x) for x in self.torsion_x],
            "forced_d": self.forced_d,
            "use_isogenous": self.use_isogenous,
            "shift_variants": self.shift_variants,
            "factor_hints": [str(h) for h in self.factor_hints],
        }


def parse_rationals(text: str) -> list[Fraction]:
    out = []
    for item in filter(None, (t.strip() for t in text.split(","))):
        try:
            out.append(Fraction(item))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"cannot parse torsion x-value {item!r} as a rational", EXIT_BAD_TORSION) from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ecdescent",
        description="Search for a point of infinite order on y^2 = x^3 + a x^2 + b x by 4- or 8-descent.",
    )
    src = p.add_argument_group("curve")
    src.add_argument("--a", type=int, help="coefficient a")
    src.add_argument("--b", type=int, help="coefficient b")
    src.add_argument("--family", help="congruent:N | bremner:n | triangle:n")
    p.add_argument("--mode", choices=("four", "eight", "auto"), default="eight")
    p.add_argument("--s1", default="2:200", metavar="A:B", help="band range for the first conic (default 2:200)")
    p.add_argument("--s2a", type=int, default=1, choices=(1, 2), help="first band for the k0 conic; 1 tries the trivial seed")
    p.add_argument("--s2b", type=int, default=99)
    p.add_argument("--s3b", type=int, default=99)
    p.add_argument("--s4b", type=int, default=199)
    p.add_argument("--torsion-x", default="", help="comma-separated rationals to reject as torsion")
    p.add_argument("--force-d", type=int, help="only try this squarefree divisor d of b")
    p.add_argument("--use-isogenous", action="store_true", help="search the 2-isogenous curve and map back")
    p.add_argument("--shift-variants", action="store_true", help="also search models with another 2-torsion point at the origin")
    p.add_argument("--factor-hint", default="", help="comma-separated primes dividing b or a^2-4b")
    p.add_argument("--checkpoint", metavar="PATH")
    p.add_argument("--resume", action="store_true", help="continue from --checkpoint")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", choices=("text", "structured"), default="text")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.family and (args.a is not None or args.b is not None):
        raise UsageError("give either --family or --a/--b, not both")
    try:
        if args.family:
            curve, source = parse_family(args.family), args.family
        elif args.a is not None and args.b is not None:
            curve, source = Curve(args.a, args.b), "raw"
        else:
            raise UsageError("a curve is required: --a A --b B or --family NAME:n")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        lo, hi = (int(x) for x in args.s1.split(":"))
        bounds = SearchBounds(lo, hi, args.s2b, args.s3b, args.s4b, args.s2a)
    except ValueError as exc:
        raise UsageError(f"bad bounds: {exc}") from None
    try:
        hints = [int(h) for h in args.factor_hint.split(",") if h.strip()]
    except ValueError:
        raise UsageError(f"bad --factor-hint {args.factor_hint!r}") from None
    if args.resume and not args.checkpoint:
        raise UsageError("--resume needs --checkpoint")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    cfg = RunConfig(
        curve=curve,
        source=source,
        bounds=bounds,
        mode=args.mode,
        torsion_x=parse_rationals(args.torsion_x),
        forced_d=args.force_d,
        use_isogenous=args.use_isogenous,
        shift_variants=args.shift_variants,
        factor_hints=hints,
        checkpoint=args.checkpoint,
        resume=args.resume,
        workers=args.workers,
        output=args.output,
    )
    searched = cfg.models()[0][0]
    if cfg.forced_d is not None and (cfg.forced_d == 0 or searched.b % cfg.forced_d):
        raise UsageError(f"--force-d {cfg.forced_d} does not divide b = {searched.b} of the searched model")
    return cfg


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Run the configured descent; returns ``(exit_status, report)``."""
    start = time.perf_counter()
    identity = cfg.identity()
    first_model, frontier = 0, None
    if cfg.resume:
        first_model, frontier = read_checkpoint(cfg.checkpoint, identity)
    models_out = []
    result = None
    trace = None
    for index, (curve, mapping) in enumerate(cfg.models()):
        entry = {"index": index, "curve": {"a": str(curve.a), "b": str(curve.b)}, "map": mapping.as_dict()}
        if index < first_model:
            entry["status"] = "exhausted"
            models_out.append(entry)
            continue

        def save(front, _trace, index=index):
            if cfg.checkpoint:
                write_checkpoint(cfg.checkpoint, identity, index, front)

        log.info("searching model %d: %s", index, curve)
        descent = Descent(
            curve,
            cfg.bounds,
            cfg.mode,
            cfg.torsion_x,
            forced_d=cfg.forced_d if index == 0 else None,
            workers=cfg.workers,
            factor_hints=cfg.factor_hints,
            target=cfg.curve,
            model_map=mapping,
            on_checkpoint=save,
            frontier=frontier if index == first_model else None,
        )
        result = descent.run()
        trace = result.trace
        entry["status"] = "found" if result.found else "exhausted"
        models_out.append(entry)
        if result.found:
            break
        if cfg.checkpoint:
            write_checkpoint(cfg.checkpoint, identity, index + 1, {})
    point = result.point if result else None
    report = {
        "header": {"curve": identity["curve"], "config": identity},
        "models": models_out,
        "result": {
            "status": "found" if point else "exhausted",
            "point": point.as_dict() if point else None,
            "naive_height": naive_height(point) if point else None,
            "model_index": models_out[-1]["index"] if point else None,
        },
        "trace": trace.as_dict() if trace else {},
        "run": {"workers": cfg.workers, "wall_seconds": round(time.perf_counter() - start, 3)},
    }
    return (EXIT_FOUND if point else EXIT_EXHAUSTED), report


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = config_from_args(args)
        status, report = run(cfg)
    except UsageError as exc:
        print(f"ecdescent: error: {exc}", file=sys.stderr)
        return exc.status
    except CheckpointError as exc:
        print(f"ecdescent: checkpoint error: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except DescentError as exc:
        print(f"ecdescent: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    out = render_structured(report) if cfg.output == "structured" else render_text(report)
    sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
