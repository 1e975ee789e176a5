"""
Command handler module for fptmc
"""

import logging

from src.cli.report import RunReport
from src.cli.verify import SUITES, run_suites
from src.engines.embedding import embed_with_stats
from src.engines.fagin import check_phi, fagin_normalize, fagin_precompute, fagin_to_slicewise
from src.engines.hom_dp import hom_to_emb, solve_hom
from src.engines.sigma1 import mc_sigma1_neq_color_coding, mc_sigma1_via_hom
from src.logic.formula_graph import formula_graph, formula_graph_neq
from src.logic.formulas import formula_length, free_variables, to_text
from src.logic.fragments import classify
from src.logic.generators import random_formula
from src.logic.normal_forms import prenex_parts, to_nnf, to_prenex
from src.logic.parser import read_formula
from src.logic.propositional import classify_prop, dump_prop, read_prop
from src.oracles.brute import brute_clique, brute_emb, brute_fagin, brute_hom, brute_wsat
from src.oracles.checkers import is_clique, is_embedding, is_homomorphism, is_wsat_witness, satisfies_fagin
from src.oracles.evaluator import Assignment, eval_naive
from src.reductions.atm import atm_encode, read_atm, simulate_atm
from src.reductions.bounded import expand_bounded
from src.reductions.types import clique_to_mc, mc_to_clique
from src.reductions.wsat import X as WSAT_X
from src.reductions.wsat import clique_to_wsat, wsat_normalize, wsat_to_fagin
from src.structures.encodings import encode_to_graph, encode_to_graph_arity_preserving
from src.structures.generators import make_rng, random_graph, random_structure, random_tree
from src.structures.graphs import edges_of, gaifman, named_graph, to_dot
from src.structures.io import dump_structure, read_structure, write_text
from src.structures.structure import Vocabulary, is_graph
from src.treewidth.decomposition import make_nice, validate_td
from src.treewidth.exact import exact_td
from src.treewidth.heuristic import heuristic_td
from src.treewidth.io import dump_td, load_td
from src.utils.errors import FormatError, FptmcError, InputError

logger = logging.getLogger(__name__)

REDUCTIONS = ("clique2mc", "mc2clique", "hom2emb", "struct2graph", "atm",
              "wsat2fagin", "clique2wsat", "bounded", "slicewise")

VERIFIED = "verified"


class CommandHandler:
    """
    Command handler for fptmc CLI

    Each ``cmd_<name>`` method builds a RunReport; ``run`` prints it and
    turns the answer or the raised error into the exit code.
    """

    def __init__(self, config, display, seed=0, argv=None, include_timings=False, force=False):
        """
        Initialize the command handler

        Args:
            config (dict): Configuration, command-line overrides applied
            display (Display): Display handler
            seed (int, optional): Seed in effect. Defaults to 0.
            argv (list, optional): Command echo for the report
            include_timings (bool, optional): Put phase timings into reports
            force (bool, optional): Lift the resource guards
        """
        self.config = config
        self.display = display
        self.seed = seed
        self.argv = list(argv or [])
        self.include_timings = include_timings
        self.force = force

        logger.debug("Command handler initialized")

    # guards

    @property
    def limit(self):
        return None if self.force else self.config['guards']['max_candidates']

    @property
    def dnf_cap(self):
        return None if self.force else self.config['guards']['max_disjuncts']

    @property
    def hashing(self):
        return self.config['hashing']

    def run(self, args):
        """
        Run one command and report its outcome

        Args:
            args (argparse.Namespace): Parsed arguments with ``command`` set

        Returns:
            int: Exit code
        """
        handler = getattr(self, f"cmd_{args.command.replace('-', '_')}", None)
        if handler is None:
            self.display.error(f"Unknown command: {args.command}")
            return InputError.exit_code
        try:
            report = handler(args)
        except FptmcError as e:
            logger.error(f"{type(e).__name__}: {e}")
            self.display.error(f"{type(e).__name__}: {e}")
            return e.exit_code
        except OSError as e:
            logger.error(f"Cannot access file: {e}")
            self.display.error(f"Cannot access file: {e}")
            return InputError.exit_code
        print(report.to_json(self.include_timings))
        self.display.answer(report)
        return report.exit_code

    def _report(self, algorithm=""):
        return RunReport(self.argv, algorithm=algorithm, seed=self.seed)

    def _emit(self, report, name, text, out, suffix):
        """Write ``text`` to ``out + suffix`` or keep it inline in the report."""
        if out:
            path = f"{out}{suffix}"
            write_text(path, text)
            report.outputs[name] = path
        else:
            report.outputs[name] = text

    def _emit_structure(self, report, name, structure, out, fmt="text"):
        if fmt == "dot":
            if not is_graph(structure):
                raise InputError("DOT output needs a graph")
            self._emit(report, name, to_dot(structure), out, f".{name}.dot")
        elif fmt == "json":
            data = {
                "vocabulary": [[s, a] for s, a in structure.vocab.symbols],
                "universe": structure.n,
                "relations": {s: sorted(structure.rel(s)) for s in structure.vocab.names},
            }
            report.result[name] = data
        else:
            self._emit(report, name, dump_structure(structure), out, f".{name}.struct")

    def _emit_formula(self, report, name, phi, out, relation_variable=None):
        header = ""
        if relation_variable is not None:
            header = f"# setvar {relation_variable.name} {relation_variable.arity}\n"
        self._emit(report, name, f"{header}{to_text(phi)}\n", out, f".{name}.fo")
        report.result[f"{name}_class"] = classify(to_prenex(phi), strict=False).label

    @staticmethod
    def _read_graph(path):
        return read_structure(path, symmetrize=True, require_graph=True)

    @staticmethod
    def _sentence(path, structure=None):
        phi, relation_variable = read_formula(path, vocab=structure.vocab if structure is not None else None)
        if relation_variable is not None:
            raise InputError(f"{path} declares relation variable {relation_variable.name}; use the fagin command")
        return phi

    @staticmethod
    def _fagin_formula(path, structure=None):
        phi, relation_variable = read_formula(path, vocab=structure.vocab if structure is not None else None)
        if relation_variable is None:
            raise InputError(f"{path} has no '# setvar X r' header")
        return phi, relation_variable

    # model checking

    def cmd_eval(self, args):
        structure = read_structure(args.structure)
        phi = self._sentence(args.formula, structure)
        pruned = args.pruned
        report = self._report("pruned" if pruned else "naive")
        with report.phase("evaluate"):
            holds = eval_naive(structure, phi, pruned=pruned)
        report.answer = holds
        report.result = {"holds": holds, "fragment": classify(to_prenex(phi), strict=False).label}
        logger.info(f"eval: A |= phi is {holds}")
        return report

    def cmd_mc_sigma1(self, args):
        structure = read_structure(args.structure)
        phi = self._sentence(args.formula, structure)
        report = self._report(args.mode)
        with report.phase("solve"):
            if args.mode == "naive":
                holds, witness, extra = eval_naive(structure, phi), None, {}
            elif args.mode == "hom":
                outcome = mc_sigma1_via_hom(structure, phi, cap=self.dnf_cap, limit=self.limit)
                holds, witness, extra = outcome.holds, outcome.witness, {"disjuncts": outcome.disjuncts}
            else:
                outcome = mc_sigma1_neq_color_coding(
                    structure, phi, mode=args.hash_mode or self.hashing['mode'], seed=self.seed,
                    epsilon=self.hashing['epsilon'], cap=self.dnf_cap, limit=self.limit,
                    coverage_limit=self.config['guards']['hash_coverage_limit'])
                holds, witness = outcome.holds, outcome.witness
                extra = {"disjuncts": outcome.disjuncts, "trials": outcome.trials}
                report.error_bound = outcome.error_bound
        if witness is not None:
            _, matrix = prenex_parts(to_prenex(phi))
            if not eval_naive(structure, matrix, Assignment(dict(witness))):
                raise AssertionError(f"witness {witness} does not satisfy the matrix")
            extra["witness"] = dict(sorted(witness.items()))
            extra[VERIFIED] = True
        report.answer = holds
        report.result = {"holds": holds, **extra}
        return report

    # homomorphisms and embeddings

    def cmd_hom(self, args):
        target = read_structure(args.target)
        pattern = read_structure(args.pattern)
        if args.brute:
            report = self._report("brute")
            with report.phase("solve"):
                h = brute_hom(target, pattern, limit=self.limit)
        else:
            with_td = "td-file" if args.td else ("exact-td" if args.exact else "min-fill")
            report = self._report(f"dp/{with_td}")
            with report.phase("decompose"):
                if args.td:
                    with open(args.td, 'r', encoding='utf-8') as f:
                        td = load_td(f.read())
                elif args.exact:
                    td = exact_td(gaifman(pattern), limit=self.config['guards']['max_exact_vertices'])
                else:
                    td = heuristic_td(gaifman(pattern))
                report.result["width"] = validate_td(pattern, td)
            with report.phase("solve"):
                h = solve_hom(target, pattern, td=td, limit=self.limit)
        report.answer = h is not None
        if h is not None:
            if not is_homomorphism(target, pattern, h):
                raise AssertionError(f"{h} is not a homomorphism")
            report.result.update({"homomorphism": {str(b): a for b, a in h.items()}, VERIFIED: True})
        return report

    def cmd_emb(self, args):
        target = read_structure(args.target)
        pattern = read_structure(args.pattern)
        if args.brute:
            report = self._report("brute")
            with report.phase("solve"):
                h = brute_emb(target, pattern, limit=self.limit)
        else:
            mode = args.hash_mode or self.hashing['mode']
            report = self._report(f"color-coding/{mode}")
            with report.phase("solve"):
                h, outcome = embed_with_stats(target, pattern, mode=mode, seed=self.seed,
                                              epsilon=self.hashing['epsilon'], limit=self.limit)
            report.result["trials"] = outcome.trials
            report.error_bound = outcome.error_bound
        report.answer = h is not None
        if h is not None:
            if not is_embedding(target, pattern, h):
                raise AssertionError(f"{h} is not an embedding")
            report.result.update({"embedding": {str(b): a for b, a in h.items()}, VERIFIED: True})
        return report

    # Fagin-defined problems

    def cmd_fagin(self, args):
        structure = read_structure(args.structure)
        phi, rv = self._fagin_formula(args.formula, structure)
        k = args.k
        report = self._report(args.mode)
        witness = None
        if args.mode == "alg1":
            with report.phase("normalize"):
                problem = fagin_normalize(phi, rv, cap=self.dnf_cap)
                star = fagin_precompute(structure, problem)
            report.result.update({"l": problem.l, "m": problem.m})
            with report.phase("solve"):
                witness = check_phi(structure, problem, k, precomputed=star)
            holds = witness is not None
        elif args.mode == "brute":
            with report.phase("solve"):
                witness = brute_fagin(structure, phi, rv, k, limit=self.limit)
            holds = witness is not None
        else:
            with report.phase("expand"):
                expanded = expand_bounded(phi, rv, k) if args.mode == "bounded" \
                    else fagin_to_slicewise(phi, rv, k)
            report.result["sentence_class"] = classify(to_prenex(expanded), strict=False).label
            with report.phase("solve"):
                holds = eval_naive(structure, expanded, pruned=True)
        if witness is not None:
            if not satisfies_fagin(structure, phi, rv, witness, k):
                raise AssertionError(f"{sorted(witness)} does not satisfy the sentence")
            report.result.update({"witness": sorted(witness), VERIFIED: True})
        report.answer = holds
        report.result["holds"] = holds
        return report

    # brute-force oracles

    def cmd_clique(self, args):
        graph = self._read_graph(args.graph)
        report = self._report("brute")
        with report.phase("solve"):
            found = brute_clique(graph, args.k, limit=self.limit)
        report.answer = found is not None
        if found is not None:
            if not is_clique(graph, found, args.k):
                raise AssertionError(f"{found} is not a clique")
            report.result.update({"clique": list(found), VERIFIED: True})
        return report

    def cmd_wsat(self, args):
        phi = read_prop(args.formula)
        report = self._report("brute")
        report.result["class"] = classify_prop(phi).label
        with report.phase("solve"):
            found = brute_wsat(phi, args.k, limit=self.limit)
        report.answer = found is not None
        if found is not None:
            if not is_wsat_witness(phi, found, args.k):
                raise AssertionError(f"{sorted(found)} does not satisfy the formula")
            report.result.update({"true_variables": sorted(found), VERIFIED: True})
        return report

    # syntax and decompositions

    def cmd_classify(self, args):
        phi, rv = read_formula(args.formula)
        report = self._report("syntactic")
        given = classify(phi, strict=False)
        prenex = classify(to_prenex(phi))
        result = {
            "fragment": given.label,
            "prenex_fragment": prenex.label,
            "rank": prenex.rank,
            "blocks": list(prenex.blocks),
            "length": formula_length(phi),
            "free_variables": sorted(free_variables(phi)),
        }
        if rv is not None:
            result["relation_variable"] = [rv.name, rv.arity]
        for key, build in (("graph", formula_graph), ("graph_neq", formula_graph_neq)):
            graph, names = build(phi)
            result[key] = [[names[a], names[b]] for a, b in edges_of(graph)]
        report.result = result
        return report

    def cmd_td(self, args):
        structure = read_structure(args.structure)
        graph = gaifman(structure)
        if args.validate:
            report = self._report("validate")
            with open(args.validate, 'r', encoding='utf-8') as f:
                td = load_td(f.read())
        elif args.exact:
            report = self._report("exact")
            with report.phase("decompose"):
                td = exact_td(graph, limit=self.config['guards']['max_exact_vertices'])
        else:
            report = self._report("min-fill")
            with report.phase("decompose"):
                td = heuristic_td(graph)
        report.result["width"] = validate_td(structure, td)
        report.result["bags"] = len(td.bags)
        if args.nice:
            td = make_nice(td)
            validate_td(structure, td)
            report.result["nice_nodes"] = len(td.bags)
        self._emit(report, "decomposition", dump_td(td), args.out, ".td")
        return report

    # reductions

    def cmd_reduce(self, args):
        if args.kind not in REDUCTIONS:
            raise InputError(f"unknown reduction {args.kind!r}; choose from {', '.join(REDUCTIONS)}")
        builder = getattr(self, f"_reduce_{args.kind}")
        report = self._report(args.kind)
        with report.phase("reduce"):
            check = builder(args, report)
        if check is not None and args.check:
            with report.phase("check"):
                source, target = check()
            agree = source == target
            report.result["check"] = {"source": source, "target": target, "agree": agree}
            logger.info(f"reduce {args.kind}: source {source}, target {target}")
            if not agree:
                logger.error(f"reduce {args.kind}: oracles disagree")
                report.answer = False
        return report

    @staticmethod
    def _inputs(args, count):
        if len(args.inputs) < count:
            raise InputError(f"reduce {args.kind} needs {count} input file(s), got {len(args.inputs)}")
        return args.inputs

    @staticmethod
    def _need_k(args):
        if args.k is None:
            raise InputError(f"reduce {args.kind} needs -k")
        return args.k

    def _reduce_clique2mc(self, args, report):
        graph = self._read_graph(self._inputs(args, 1)[0])
        k = self._need_k(args)
        graph, delta = clique_to_mc(graph, k)
        self._emit_formula(report, "sentence", delta, args.out)
        return lambda: (brute_clique(graph, k, limit=self.limit) is not None, eval_naive(graph, delta))

    def _reduce_mc2clique(self, args, report):
        paths = self._inputs(args, 2)
        graph = self._read_graph(paths[0])
        phi = self._sentence(paths[1], graph)
        reduced, k = mc_to_clique(graph, phi, self.config['guards']['max_type_variables'])
        report.result["k"] = k
        report.result["vertices"] = reduced.n
        self._emit_structure(report, "graph", reduced, args.out, args.format)
        return lambda: (eval_naive(graph, phi), brute_clique(reduced, k, limit=self.limit) is not None)

    def _reduce_hom2emb(self, args, report):
        paths = self._inputs(args, 2)
        target, pattern = read_structure(paths[0]), read_structure(paths[1])
        expanded = hom_to_emb(target, pattern)
        report.result["elements"] = expanded.n
        self._emit_structure(report, "structure", expanded, args.out, args.format)
        return lambda: (brute_hom(target, pattern, limit=self.limit) is not None,
                        brute_emb(expanded, pattern, limit=self.limit) is not None)

    def _reduce_struct2graph(self, args, report):
        paths = self._inputs(args, 2)
        structure = read_structure(paths[0])
        phi = to_prenex(to_nnf(self._sentence(paths[1], structure)))
        if args.arity is not None:
            graph, encoded = encode_to_graph_arity_preserving(structure, phi, args.arity)
        else:
            graph, encoded = encode_to_graph(structure, phi)
        report.result["source_class"] = classify(phi).label
        report.result["vertices"] = graph.n
        self._emit_structure(report, "graph", graph, args.out, args.format)
        self._emit_formula(report, "sentence", encoded, args.out)
        return lambda: (eval_naive(structure, phi), eval_naive(graph, encoded, pruned=True))

    def _reduce_atm(self, args, report):
        machine = read_atm(self._inputs(args, 1)[0])
        k = self._need_k(args)
        t = args.t or 1
        structure, phi = atm_encode(machine, k, t)
        report.result["elements"] = structure.n
        self._emit_structure(report, "structure", structure, args.out, args.format)
        self._emit_formula(report, "sentence", phi, args.out)
        return lambda: (simulate_atm(machine, k - 1, t), eval_naive(structure, phi, pruned=True))

    def _reduce_wsat2fagin(self, args, report):
        phi = read_prop(self._inputs(args, 1)[0])
        normalized = wsat_normalize(phi, args.width)
        structure, psi = wsat_to_fagin(normalized)
        report.result["class"] = classify_prop(normalized).label
        report.result["elements"] = structure.n
        self._emit(report, "normalized", dump_prop(normalized), args.out, ".normalized.prop")
        self._emit_structure(report, "structure", structure, args.out, args.format)
        self._emit_formula(report, "sentence", psi, args.out, WSAT_X)
        if args.k is None:
            return None
        return lambda: (brute_wsat(normalized, args.k, limit=self.limit) is not None,
                        brute_fagin(structure, psi, WSAT_X, args.k, limit=self.limit) is not None)

    def _reduce_clique2wsat(self, args, report):
        graph = self._read_graph(self._inputs(args, 1)[0])
        phi, names = clique_to_wsat(graph)
        report.result["class"] = classify_prop(phi).label
        self._emit(report, "formula", dump_prop(phi), args.out, ".prop")
        if args.k is None:
            return None
        return lambda: (brute_clique(graph, args.k, limit=self.limit) is not None,
                        brute_wsat(phi, args.k, variables=names, limit=self.limit) is not None)

    def _reduce_bounded(self, args, report):
        return self._reduce_fagin_sentence(args, report, expand_bounded)

    def _reduce_slicewise(self, args, report):
        return self._reduce_fagin_sentence(args, report, fagin_to_slicewise)

    def _reduce_fagin_sentence(self, args, report, build):
        paths = self._inputs(args, 1)
        phi, rv = self._fagin_formula(paths[0])
        k = self._need_k(args)
        sentence = build(phi, rv, k)
        self._emit_formula(report, "sentence", sentence, args.out)
        if len(paths) < 2:
            return None
        structure = read_structure(paths[1])
        return lambda: (brute_fagin(structure, phi, rv, k, limit=self.limit) is not None,
                        eval_naive(structure, sentence, pruned=True))

    # generators

    def cmd_gen(self, args):
        rng = make_rng(self.seed)
        kind = args.kind.replace("_", "-") if args.kind.startswith("random") else args.kind
        report = self._report(f"gen/{kind}")
        if kind == "random-formula":
            vocab = parse_vocabulary(args.vocab)
            phi = random_formula(rng, vocab, kind=args.fragment, t=args.t, max_vars=args.vars, depth=args.depth)
            self._emit_formula(report, "formula", phi, args.out)
            return report
        if kind == "random-graph":
            structure = random_graph(rng, args.n, args.p)
        elif kind == "random-tree":
            structure = random_tree(rng, args.n)
        elif kind == "random-structure":
            structure = random_structure(rng, parse_vocabulary(args.vocab), args.n, args.p)
        else:
            try:
                structure = named_graph(kind.replace("_", ""))
            except ValueError as e:
                raise InputError(str(e)) from e
        report.result["elements"] = structure.n
        report.result["tuples"] = sum(len(structure.rel(s)) for s in structure.vocab.names)
        self._emit_structure(report, "structure", structure, args.out, args.format)
        return report

    # verification suites

    def cmd_verify(self, args):
        if args.suite != "all" and args.suite not in SUITES:
            raise InputError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
        names = list(SUITES) if args.suite == "all" else [args.suite]
        report = self._report("quick" if args.quick else "full")
        with report.phase("verify"):
            outcomes = run_suites(names, self.config, self.seed, quick=args.quick,
                                  progress=self.config['ui']['progress'])
        failed = 0
        for name, (passes, failures) in outcomes.items():
            self.display.suite(name, passes, len(failures))
            report.result[name] = {"passed": passes, "failed": len(failures), "failures": failures[:5]}
            failed += len(failures)
        report.answer = failed == 0
        return report


def parse_vocabulary(text):
    """
    ``"R:2,S:1"`` as a Vocabulary

    Args:
        text (str): Comma-separated ``symbol:arity`` pairs

    Returns:
        Vocabulary: The symbols in the given order
    """
    symbols = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, _, arity = part.partition(":")
        if not arity.isdigit():
            raise FormatError(f"expected 'symbol:arity', got {part!r}")
        symbols.append((name, int(arity)))
    return Vocabulary(tuple(symbols))
