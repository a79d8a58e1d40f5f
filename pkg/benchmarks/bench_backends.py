"""Compare the compiled and pure-Python forest kernels.

    python benchmarks/bench_backends.py --n 100000

Every run replays the same deterministic workload on each backend and
checks that both produce the same output before reporting timings.
"""

import argparse
import time

from sortheap import PairingHeap, SortHeap
from sortheap import workload as wl
from sortheap._backend import BACKENDS
from sortheap.graph import random_graph, run_dijkstra


def _time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(n, seed):
    sort_ops = wl.gen_heapsort(n, seed)
    round_ops = wl.gen_rounds(max(2, n // 10), n // 10, seed)
    g = random_graph(max(2, n // 50), n // 5, 10_000, wl.SplitMix64(seed))
    return {
        "heapsort sort/eager": lambda cls: wl.replay(sort_ops, SortHeap("eager", forest_cls=cls)),
        "heapsort sort/model": lambda cls: wl.replay(sort_ops, SortHeap("model", forest_cls=cls)),
        "heapsort pairing": lambda cls: wl.replay(sort_ops, PairingHeap(forest_cls=cls)),
        "rounds sort/eager": lambda cls: wl.replay(round_ops, SortHeap("eager", forest_cls=cls)),
        "dijkstra sort/eager": lambda cls: run_dijkstra(g, 1, "sort", forest_cls=cls),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    names = sorted(BACKENDS)
    if "compiled" not in BACKENDS:
        print("compiled backend not built; timing python only")
    print(f"{'case':<22}" + "".join(f"{b:>12}" for b in names) + ("     speedup" if len(names) > 1 else ""))
    for case, fn in cases(args.n, args.seed).items():
        times, outs = [], []
        for b in names:
            t, out = _time(lambda: fn(BACKENDS[b]), args.repeat)
            times.append(t)
            outs.append(out)
        if any(o != outs[0] for o in outs):
            raise SystemExit(f"{case}: backends disagree")
        line = f"{case:<22}" + "".join(f"{t:>11.3f}s" for t in times)
        if len(names) > 1:
            line += f"{times[names.index('python')] / times[names.index('compiled')]:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
