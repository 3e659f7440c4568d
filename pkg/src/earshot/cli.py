"""Command-line entry points for the recognition engine."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import audio_io, evaluate, report, synth
from .errors import EarshotError
from .features import extract_segment_features
from .kb import KnowledgeBase
from .pipeline import Engine


def _load_kb(path: str) -> KnowledgeBase:
    return KnowledgeBase.load(Path(path))


def _wav_source(path: str):
    return audio_io.replay_source(path)


def cmd_features(args) -> int:
    with open(args.wav, "rb") as fh:
        buf = audio_io.decode_wav(fh.read())
    vector = extract_segment_features(list(audio_io.frame_stream(buf)))
    for value in vector:
        print(f"{value:.10g}")
    return 0


def cmd_recognize(args) -> int:
    kb = _load_kb(args.kb)
    engine = Engine(kb)
    result = engine.run_manual_recognition(_wav_source(args.wav), environment=args.env)
    if result.level == 0:
        print(f"unrecognized (g={result.gpi.g:.4f}, level=0)")
    else:
        print(f"class={result.class_name} level={result.level} g={result.gpi.g:.4f} "
              f"posterior={result.posterior:.4f}")
    return 0


def cmd_record(args) -> int:
    kb_path = Path(args.kb)
    kb = KnowledgeBase.load(kb_path) if (kb_path / "manifest.json").exists() else KnowledgeBase()
    engine = Engine(kb)
    if args.source == "live":
        print("live capture is not available in this build; replay a WAV instead",
              file=sys.stderr)
        return 1
    outcome = engine.run_recording(_wav_source(args.source))
    if outcome.status != "captured":
        print(f"no sound captured ({outcome.status})", file=sys.stderr)
        return 1
    record_id = kb.add_record(args.label, outcome.features,
                              environment=args.env, audio=outcome.audio)
    kb.save(kb_path)
    print(f"recorded {record_id} class={args.label} "
          f"duration={outcome.segment.duration:.2f}s")
    return 0


def cmd_eval(args) -> int:
    kb = _load_kb(args.kb)
    algorithm = {"nb": "naive_bayes", "1nn": "nearest_neighbor"}[args.algo]
    out_dir = Path(args.out)
    result = evaluate.cross_validate(kb, k=args.folds, algorithm=algorithm, seed=args.seed)
    report.write_eval_csv(result, out_dir / f"eval_{args.algo}.csv")
    report.plot_confusion(result, out_dir / f"confusion_{args.algo}.png")
    print(f"algorithm={algorithm} folds={args.folds} accuracy={result.accuracy:.4f}")
    if result.flags:
        print(f"flags: {', '.join(result.flags)}")
    if args.curves:
        records, _ = kb.training_view()
        per_class = min(sum(1 for r in records if r.class_name == n)
                        for n in {r.class_name for r in records})
        grid = sorted({max(2, m) for m in (2, per_class // 2, per_class) if m >= 2})
        rows = evaluate.learning_curves(kb, instance_grid=grid,
                                        algorithm=algorithm, seed=args.seed, k=args.folds)
        report.write_curves_csv(rows, out_dir / f"curves_{args.algo}.csv")
        report.plot_curves(rows, out_dir / f"curves_{args.algo}.png")
        print(f"curves written for instance grid {grid}")
    print(f"reports in {out_dir}/")
    return 0


def cmd_synth_corpus(args) -> int:
    out = synth.generate_corpus(args.out, args.classes, args.instances, args.seed)
    print(f"wrote {args.classes} classes x {args.instances} instances to {out}/")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    kb_path = Path(args.kb)
    kb = KnowledgeBase.load(kb_path) if (kb_path / "manifest.json").exists() else KnowledgeBase()
    app = create_app(kb, kb_path=kb_path, columns_per_second=args.columns_rate)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="earshot",
                                     description="Personalized environmental sound recognition")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("features", help="print the 54 feature values of a WAV file")
    p.add_argument("wav")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("recognize", help="recognize the first detected sound in a WAV")
    p.add_argument("wav")
    p.add_argument("--kb", required=True)
    p.add_argument("--env", default=None)
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("record", help="capture a sound into the knowledge base")
    p.add_argument("source", metavar="wav|live")
    p.add_argument("--kb", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--env", default=None)
    p.set_defaults(func=cmd_record)

    p = sub.add_parser("eval", help="cross-validate the knowledge base")
    p.add_argument("--kb", required=True)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--algo", choices=["nb", "1nn"], default="nb")
    p.add_argument("--curves", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="eval_out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth-corpus", help="generate the synthetic WAV corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--classes", type=int, required=True)
    p.add_argument("--instances", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth_corpus)

    p = sub.add_parser("serve", help="run the local streaming service")
    p.add_argument("--kb", required=True)
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--columns-rate", type=int, choices=[23, 12, 8], default=23)
    p.add_argument("--host", default="127.0.0.1",
                   help="loopback by default; set explicitly to expose on the LAN")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EarshotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
