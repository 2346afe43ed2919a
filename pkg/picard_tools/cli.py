import argparse
import json
import logging
import sys
from pathlib import Path

from picard_tools import cech, divisors, simplicial, spectrum
from picard_tools.binoid import as_simplicial, from_simplicial
from picard_tools.errors import (
    NotSimplicialPresentation,
    ParseError,
    PicardToolsError,
    WrongInputKind,
)
from picard_tools.exactalg import FinAbGroup
from picard_tools.fileformats import BINOID, MONOMIAL, SIMPLICIAL, load_input

EXIT_OK = 0
EXIT_PARSE_ERROR = 2
EXIT_PRECONDITION = 3
EXIT_INCOMPLETE = 4

LOG_NAME = "picard_tools.log"


class Parser(argparse.ArgumentParser):
    def add_input(self) -> None:
        self.add_argument(
            "input",
            type=extant_file,
            help="simplicial complex, binoid, or monomial ideal file",
        )

    def add_json(self) -> None:
        self.add_argument(
            "--json",
            action="store_true",
            help="Print the result as JSON",
        )

    def add_dot(self) -> None:
        self.add_argument(
            "--dot",
            action="store_true",
            help="Print the Hasse diagram in DOT syntax",
        )

    def add_reduced(self) -> None:
        self.add_argument(
            "--reduced",
            action="store_true",
            help="Reduced cohomology, starting in degree -1",
        )

    def add_bound(self) -> None:
        self.add_argument(
            "--bound",
            type=positive_int,
            default=cech.DEFAULT_BOUND,
            help=f"Search bound for certifying units (default {cech.DEFAULT_BOUND})",
        )

    def add_degree(self) -> None:
        self.add_argument(
            "--degree",
            type=int,
            help="Only print the group in this degree",
        )

    def add_face(self) -> None:
        self.add_argument(
            "--face",
            type=face_labels,
            required=True,
            help='vertices of the face, separated by spaces ("1 3")',
        )

    def add_height(self, default: int | None = None) -> None:
        self.add_argument(
            "--height",
            type=nonnegative_int,
            default=default,
            help="Use the open set of primes of at most this height",
        )

    def add_locus(self) -> None:
        self.add_height(default=1)

    def add_symbol(self) -> None:
        self.add_argument(
            "--symbol",
            type=str,
            default=cech.DEFAULT_SYMBOL,
            help=f"Name of the coefficient group (default {cech.DEFAULT_SYMBOL})",
        )

    def add_verbose(self) -> None:
        self.add_argument(
            "--verbose",
            "-v",
            action="store_true",
            help="Show progress messages on stderr",
        )

    def add_logdirectory(self) -> None:
        self.add_argument(
            "--log_folder",
            type=extant_dir,
            help="""Optional. Append a log file to this directory""",
        )


def extant_dir(p: str) -> Path:
    path = Path(p)
    if not path.is_dir():
        raise argparse.ArgumentTypeError(f"{path} is not a directory")

    return path


def extant_file(p: str) -> Path:
    path = Path(p)
    if not path.is_file():
        raise argparse.ArgumentTypeError(f"{path} is not a file")

    return path


def positive_int(value: str) -> int:
    if not value.isdigit() or int(value) < 1:
        raise argparse.ArgumentTypeError(f"{value} is not a positive integer")
    return int(value)


def nonnegative_int(value: str) -> int:
    if not value.isdigit():
        raise argparse.ArgumentTypeError(f"{value} is not a nonnegative integer")
    return int(value)


def face_labels(value: str) -> tuple:
    return simplicial.as_face(int(t) if t.isdigit() else t for t in value.split())


def setup_logging(log_file: Path | None = None, verbose: bool = False) -> None:
    logger = logging.getLogger()
    logger.setLevel(logging.INFO)
    for handler in list(logger.handlers):
        if handler.get_name() == "picard_tools":
            logger.removeHandler(handler)

    # file handler
    if log_file:
        log_file_formatter = logging.Formatter("%(asctime)s - %(levelname)s - %(message)s")
        fh = logging.FileHandler(str(log_file), mode="a")
        fh.set_name("picard_tools")
        fh.setFormatter(log_file_formatter)
        logger.addHandler(fh)

    # console handler, stderr only so stdout carries just the result
    console_formatter = logging.Formatter("%(levelname)s - %(message)s")
    ch = logging.StreamHandler(sys.stderr)
    ch.set_name("picard_tools")
    ch.setLevel(logging.INFO if verbose else logging.WARNING)
    ch.setFormatter(console_formatter)
    logger.addHandler(ch)


########## input coercion

def as_complex(kind: str, value) -> simplicial.SimplicialComplex:
    if kind == SIMPLICIAL:
        return value
    return as_simplicial(value)


def as_binoid(kind: str, value):
    if kind == SIMPLICIAL:
        return from_simplicial(value)
    return value


def require(kind: str, allowed, verb: str) -> None:
    if kind not in allowed:
        raise WrongInputKind(f"{verb} does not accept a {kind} file")


########## output

def format_groups(groups, start: int = 0, minimum: int = 2) -> str:
    """
    `H^0 = 0, H^1 = Z`. Degrees past `minimum` are shown only up to the
    last nontrivial group.
    """
    groups = list(groups)
    groups += [FinAbGroup.trivial()] * max(0, minimum - len(groups))
    shown = len(groups)
    while shown > minimum and groups[shown - 1].is_trivial:
        shown -= 1
    return ", ".join(f"H^{start + k} = {g}" for k, g in enumerate(groups[:shown]))


def select_degree(groups, degree: int, start: int = 0) -> str:
    index = degree - start
    group = groups[index] if 0 <= index < len(groups) else FinAbGroup.trivial()
    return f"H^{degree} = {group}"


def groups_output(args, groups, start: int = 0, minimum: int = 2) -> str:
    if args.json:
        return as_json({"start": start, "cohomology": [g.to_dict() for g in groups]})
    if args.degree is not None:
        return select_degree(groups, args.degree, start) + "\n"
    return format_groups(groups, start, minimum) + "\n"


def as_json(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


########## commands

def run_spec(args, kind, value) -> tuple[str, int]:
    spec = spectrum.compute_spec(as_binoid(kind, value))
    if args.dot:
        return spectrum.to_dot(spec), EXIT_OK
    if args.json:
        return as_json(spec.to_dict()), EXIT_OK
    lines = [f"{spec.prime_text(p)}  height {spec.heights[p]}" for p in spec.primes]
    return "\n".join(lines) + "\n", EXIT_OK


def run_dot(args, kind, value) -> tuple[str, int]:
    return spectrum.to_dot(spectrum.compute_spec(as_binoid(kind, value))), EXIT_OK


def run_picard(args, kind, value) -> tuple[str, int]:
    require(kind, (SIMPLICIAL, BINOID), args.verb)
    return groups_output(args, cech.local_picard_formula(as_complex(kind, value))), EXIT_OK


def run_picard_general(args, kind, value) -> tuple[str, int]:
    require(kind, (BINOID,), args.verb)
    result = cech.local_picard_general(value, args.bound)
    status = EXIT_OK if result.complete else EXIT_INCOMPLETE
    if args.json:
        return as_json(result.to_dict()), status
    return groups_output(args, result.cohomology), status


def run_cohomology(args, kind, value) -> tuple[str, int]:
    require(kind, (SIMPLICIAL, BINOID), args.verb)
    groups = simplicial.cohomology(as_complex(kind, value), reduced=args.reduced)
    start = -1 if args.reduced else 0
    return groups_output(args, groups, start, minimum=len(groups)), EXIT_OK


def run_sr_cohomology(args, kind, value) -> tuple[str, int]:
    require(kind, (SIMPLICIAL, BINOID), args.verb)
    parts = cech.stanley_reisner_cohomology(as_complex(kind, value), args.symbol)
    if args.json:
        return as_json({"start": 0, "cohomology": [p.to_dict() for p in parts]}), EXIT_OK
    if args.degree is not None:
        part = parts[args.degree] if 0 <= args.degree < len(parts) else "0"
        return f"H^{args.degree} = {part}\n", EXIT_OK
    return ", ".join(f"H^{k} = {p}" for k, p in enumerate(parts)) + "\n", EXIT_OK


def simplicial_or_none(kind: str, value) -> simplicial.SimplicialComplex | None:
    """The complex behind a simplicial file, or a binoid file with only squarefree ∞-relations."""
    if kind == SIMPLICIAL:
        return value
    try:
        return as_simplicial(value)
    except NotSimplicialPresentation:
        return None


def run_class_group(args, kind, value) -> tuple[str, int]:
    require(kind, (SIMPLICIAL, BINOID), args.verb)
    delta = simplicial_or_none(kind, value)
    if delta is not None:
        group = cech.class_group_simplicial(delta)
    else:
        group = divisors.class_group(value)
    return (as_json(group.to_dict()) if args.json else f"{group}\n"), EXIT_OK


def run_pic_open(args, kind, value) -> tuple[str, int]:
    require(kind, (SIMPLICIAL, BINOID), args.verb)
    delta = simplicial_or_none(kind, value)
    if delta is None:
        result = cech.pic_open_general(value, args.height, args.bound)
        status = EXIT_OK if result.complete else EXIT_INCOMPLETE
        if args.json:
            return as_json(result.to_dict()), status
        return groups_output(args, result.cohomology), status
    spec = spectrum.compute_spec(from_simplicial(delta))
    groups = cech.pic_open_subset(delta, spectrum.height_locus(spec, args.height), spec)
    return groups_output(args, groups), EXIT_OK


def run_nerve(args, kind, value) -> tuple[str, int]:
    spec = spectrum.compute_spec(as_binoid(kind, value))
    if args.height is None:
        open_set = spectrum.punctured(spec)
    else:
        open_set = spectrum.height_locus(spec, args.height)
    cover = spectrum.minimal_cover(spec, open_set)
    nerve = spectrum.nerve(spec, cover)
    if args.json:
        names = spec.binoid.names
        payload = {"cover": [[names[i] for i in s] for s in cover], "nerve": nerve.to_dict()}
        return as_json(payload), EXIT_OK
    opens = ", ".join(spec.support_text(s) for s in cover)
    return f"cover: {opens}\nnerve: {nerve}\n", EXIT_OK


def run_link(args, kind, value) -> tuple[str, int]:
    require(kind, (SIMPLICIAL, BINOID), args.verb)
    result = simplicial.link(as_complex(kind, value), args.face)
    return (as_json(result.to_dict()) if args.json else f"{result}\n"), EXIT_OK


def run_monomial_report(args, kind, value) -> tuple[str, int]:
    require(kind, (MONOMIAL, BINOID), args.verb)
    report = cech.monomial_report(value, args.symbol)
    if args.json:
        return as_json(report.to_dict()), EXIT_OK
    lines = [f"radical: {report.radical}", f"is_radical: {str(report.is_radical).lower()}"]
    lines += [f"H^{k} = {part}" for k, part in enumerate(report.parts)]
    lines += [
        f"nonvanishing_h1: {str(report.nonvanishing_h1).lower()}",
        f"higher_cech_vanish: {str(report.higher_cech_vanish).lower()}",
        f"unipotent_part: {report.unipotent_part}",
    ]
    if report.uncounted:
        lines.append(f"note: {' + '.join(report.uncounted)} in H^1 depends on the field and is not counted")
    return "\n".join(lines) + "\n", EXIT_OK


COMMANDS = {
    "spec": (run_spec, "Prime ideals of the binoid", ("json", "dot")),
    "dot": (run_dot, "Hasse diagram of the spectrum in DOT syntax", ()),
    "picard": (run_picard, "Local Picard groups of a simplicial binoid", ("json", "degree")),
    "picard-general": (
        run_picard_general,
        "Local Picard groups of an integral binoid by Čech cohomology",
        ("json", "degree", "bound"),
    ),
    "cohomology": (run_cohomology, "Simplicial cohomology", ("json", "degree", "reduced")),
    "sr-cohomology": (
        run_sr_cohomology,
        "Cohomology of the units on the punctured spectrum of K[Δ]",
        ("json", "degree", "symbol"),
    ),
    "class-group": (run_class_group, "Divisor class group", ("json",)),
    "pic-open": (run_pic_open, "Picard groups of the primes of height ≤ H", ("json", "degree", "locus", "bound")),
    "nerve": (run_nerve, "Minimal cover of Spec• (or of a height locus) and its nerve", ("json", "height")),
    "link": (run_link, "Link of a face", ("json", "face")),
    "monomial-report": (
        run_monomial_report,
        "Radical, split cohomology and non-vanishing verdict of a monomial quotient",
        ("json", "symbol"),
    ),
}


def build_parser() -> Parser:
    parser = Parser(
        prog="picard_tools",
        description="Spectra, local Picard groups and class groups of binoids",
    )
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=Parser)
    for verb, (_, description, options) in COMMANDS.items():
        command = verbs.add_parser(verb, help=description, description=description)
        command.add_input()
        for option in options:
            getattr(command, f"add_{option}")()
        command.add_verbose()
        command.add_logdirectory()
    return parser


def run(args) -> int:
    kind, value = load_input(args.input)
    logging.info(f"Read {kind} input from {args.input}")
    handler = COMMANDS[args.verb][0]
    output, status = handler(args, kind, value)
    sys.stdout.write(output)
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    log_file = args.log_folder / LOG_NAME if args.log_folder else None
    setup_logging(log_file, args.verbose)

    for option in ("json", "dot", "degree"):
        if not hasattr(args, option):
            setattr(args, option, None)

    try:
        status = run(args)
    except ParseError as e:
        logging.error(f"{args.input}: {e}")
        return EXIT_PARSE_ERROR
    except PicardToolsError as e:
        logging.error(f"{type(e).__name__}: {e}")
        return EXIT_PRECONDITION

    if status == EXIT_INCOMPLETE:
        logging.error("Result is incomplete; raise --bound to certify every unit")
    return status


if __name__ == "__main__":
    sys.exit(main())
