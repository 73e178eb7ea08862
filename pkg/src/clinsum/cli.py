"""Command-line entry point: ``clinsum <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .concepts import load_dictionary, load_groups
from .detector import UNMATCHED, load_rules
from .errors import ClinsumError, MissingTreeError
from .evaluation import evaluate_concepts, evaluate_negation, load_eval
from .lexicon import load_lexicon
from .negex import WindowConfig
from .notes import BODY, split_note
from .pipeline import Pipeline, format_text, format_tsv
from .resources import load_stopwords
from .tree import ChainProvider, CommandTreeProvider, Treebank, load_treebank, yield_tokens
from .tregex import Matcher, parse_pattern

EXIT_OK, EXIT_INPUT, EXIT_MISSING_TREE = 0, 1, 2


def _add_trees(p):
    p.add_argument("--trees", action="append", default=[], metavar="FILE",
                   help="treebank file (sentence line + bracketed tree line per record); repeatable")
    p.add_argument("--parser-cmd", metavar="CMD",
                   help="external parser: one fragment per line in, one tree per line out")


def _add_negation(p):
    _add_trees(p)
    p.add_argument("--lexicon", metavar="TSV", help="trigger lexicon (default: bundled)")
    p.add_argument("--rules", metavar="FILE", help="rule file (default: bundled)")
    p.add_argument("--stopwords", metavar="FILE", help="stopword list (default: bundled)")


def _add_concepts(p):
    p.add_argument("--dict", dest="dictionary", metavar="TSV", help="concept dictionary (default: bundled)")
    p.add_argument("--groups", metavar="FILE", help="semantic groups (default: bundled)")


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; exit status 2 is reserved for missing trees
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="clinsum", description="Negation-aware clinical concept summaries.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="itemized concepts with polarity, per note section")
    p.add_argument("note", help="clinical note text file")
    _add_negation(p)
    _add_concepts(p)
    p.add_argument("--format", choices=("text", "tsv"), default="text")
    p.add_argument("--no-filter", action="store_true", help="skip semantic-type filtering")

    p = sub.add_parser("negate", help="negation detection over one sentence per line")
    p.add_argument("sentences", help="file with one pre-tokenized sentence per line")
    _add_negation(p)
    _add_concepts(p)
    p.add_argument("--trace", action="store_true", help="print the step-by-step trace and final itemized output")
    p.add_argument("--section", default=BODY, help="section name used in the final output (default: %(default)s)")

    p = sub.add_parser("tregex", help="match a tree pattern against treebank files")
    p.add_argument("pattern")
    _add_trees(p)

    p = sub.add_parser("eval-neg", help="negation accuracy against gold annotations")
    p.add_argument("eval_file")
    p.add_argument("--mode", choices=("syntax", "negex"), default="syntax")
    _add_negation(p)
    p.add_argument("--window", type=int, default=5, help="negex window in tokens (default: %(default)s)")
    p.add_argument("--no-comma-terminator", action="store_true", help="negex scopes run past commas")

    p = sub.add_parser("eval-con", help="concept identification scores against gold annotations")
    p.add_argument("eval_file")
    p.add_argument("--filter", choices=("on", "off"), default="on")
    _add_concepts(p)
    return ap


def _provider(args):
    bank = Treebank()
    for path in args.trees:
        bank = bank.merge(load_treebank(path))
    cmd = CommandTreeProvider(args.parser_cmd) if args.parser_cmd else None
    return ChainProvider(bank, cmd)


def _pipeline(args, filtering=True) -> Pipeline:
    return Pipeline(
        provider=_provider(args),
        lexicon=load_lexicon(args.lexicon),
        rules=load_rules(args.rules),
        dictionary=load_dictionary(args.dictionary),
        groups=load_groups(args.groups) if filtering else None,
        stopwords=load_stopwords(args.stopwords),
    )


def trace_lines(index: int, sentence: str, results) -> list[str]:
    """One sentence's trace in the record layout of the development log."""
    flag = "\t [NEGATED]" if results else ""
    lines = [f"sent: {index}", f"original: {sentence}{flag}", ""]
    for r in results:
        lines.append(f"neg part: {r.fragment.text}")
        lines.append(f"negated term: {r.trigger.term.text}")
        for label, tree in r.steps:
            lines.append(f"--- {label}")
            lines.append(f"constituency tree: {tree}")
        if r.rule_name == UNMATCHED:
            lines.append(f"--- {UNMATCHED}")
        elif r.extracted is not None and list(r.negated_tokens) != yield_tokens(r.extracted):
            lines.append("--- remove first token f if f in negated list or stopword list")
        lines.append(f">> {r.text}")
        lines.append(f">> negated span: {r.span}" if r.span is None else f">> negated span: ({r.span[0]}, {r.span[1]})")
        lines.append("")
    return lines


def cmd_summarize(args, out):
    pipe = _pipeline(args, filtering=not args.no_filter)
    doc = split_note(Path(args.note).read_text(encoding="utf-8"))
    summary = pipe.summarize(doc)
    out.write(format_tsv(summary) if args.format == "tsv" else format_text(summary))


def cmd_negate(args, out):
    pipe = _pipeline(args)
    sentences = [
        " ".join(line.split())
        for line in Path(args.sentences).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    analyses = []
    missing = []
    for s in sentences:
        try:
            analyses.append(pipe.analyze(s))
        except MissingTreeError as exc:
            missing.extend(f"{f} (in: {s})" for f in exc.fragments)
    if missing:
        raise MissingTreeError(missing)
    if args.trace:
        lines = []
        for i, a in enumerate(analyses):
            lines.extend(trace_lines(i, a.sentence, a.negations))
        lines += ["--- Final output ---", ""]
        lines.append(format_text([(args.section, [m for a in analyses for m in a.mentions])]).rstrip("\n"))
        out.write("\n".join(lines) + "\n")
        return
    for i, a in enumerate(analyses):
        for r in a.negations:
            span = "" if r.span is None else f"{r.span[0]},{r.span[1]}"
            out.write(f"{i}\t{r.trigger.term.text}\t{r.rule_name}\t{span}\t{r.text}\n")


def cmd_tregex(args, out):
    pattern = parse_pattern(args.pattern)
    bank = Treebank()
    for path in args.trees:
        bank = bank.merge(load_treebank(path))
    if not len(bank):
        raise ValueError("tregex needs at least one --trees file")
    total = 0
    for i, (sentence, tree) in enumerate(bank):
        matcher = Matcher(tree)
        for m in matcher.match_all(pattern):
            total += 1
            caps = " ".join(f"{k}={tree.find(v).label}" for k, v in sorted(m.captures.items()))
            out.write(f"{i}\t{tree.find(m.root)}" + (f"\t{caps}" if caps else "") + "\n")
    out.write(f"# {total} match(es) in {len(bank)} tree(s)\n")


def cmd_eval_neg(args, out):
    records = load_eval(args.eval_file)
    if args.mode == "syntax":
        metrics = evaluate_negation(
            records,
            "syntax",
            provider=_provider(args),
            lexicon=load_lexicon(args.lexicon),
            rules=load_rules(args.rules),
            stopwords=load_stopwords(args.stopwords),
        )
    else:
        cfg = WindowConfig.make(args.window, not args.no_comma_terminator)
        metrics = evaluate_negation(records, "negex", lexicon=load_lexicon(args.lexicon), cfg=cfg)
    out.write(f"mode={args.mode} {metrics}\n")


def cmd_eval_con(args, out):
    records = load_eval(args.eval_file)
    on = args.filter == "on"
    metrics = evaluate_concepts(
        records, load_dictionary(args.dictionary), load_groups(args.groups) if on else None, filtering=on
    )
    out.write(f"filter={args.filter} {metrics}\n")


COMMANDS = {
    "summarize": cmd_summarize,
    "negate": cmd_negate,
    "tregex": cmd_tregex,
    "eval-neg": cmd_eval_neg,
    "eval-con": cmd_eval_con,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args, out)
    except MissingTreeError as exc:
        err.write(f"clinsum: {exc}\n")
        return EXIT_MISSING_TREE
    except (ClinsumError, OSError, ValueError) as exc:
        err.write(f"clinsum: {exc}\n")
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
