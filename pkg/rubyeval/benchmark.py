import time
import random
from rubyeval.core.metrics import exact_ted, top_down_ted, ruby
from rubyeval.core.minilang import parse_source

STATEMENTS = [
    "int a{k} = x + {k};",
    "if (a{k} > {k}) {{ x = x - a{k}; }} else {{ x = x + 1; }}",
    "while (x < {k}) {{ x += 2; }}",
    "log(x, {k});",
    "foreach (var v{k} in items) {{ total += v{k}; }}",
]


def random_method(rng, length):
    body = " ".join(rng.choice(STATEMENTS).format(k=rng.randint(0, 9)) for _ in range(length))
    return f"int run(int x, int[] items) {{ int total = 0; {body} return total + x; }}"


def run_benchmark(trials=100, length=8):
    print(f"--- Benchmarking tree edit distance ({trials} trials, {length} statements per method) ---")
    rng = random.Random(0)

    # 1. Build method pairs
    print("\nGenerating method pairs...")
    pairs = [(random_method(rng, length), random_method(rng, length)) for _ in range(trials)]
    trees = [(parse_source(a).tree, parse_source(b).tree) for a, b in pairs]
    mean_nodes = sum(t1.size + t2.size for t1, t2 in trees) / (2 * trials)
    print(f"Mean tree size: {mean_nodes:.1f} nodes")

    # 2. Exact Zhang-Shasha distance
    print("\nRunning exact distance...")
    start_time = time.perf_counter()
    exact = [exact_ted(t1, t2) for t1, t2 in trees]
    exact_duration = time.perf_counter() - start_time
    print(f"Exact Time: {exact_duration:.4f}s")

    # 3. Top-down bound
    print("\nRunning top-down bound...")
    start_time = time.perf_counter()
    bound = [top_down_ted(t1, t2) for t1, t2 in trees]
    bound_duration = time.perf_counter() - start_time
    print(f"Top-down Time: {bound_duration:.4f}s")

    # 4. Full cascade
    print("\nRunning full RUBY scoring...")
    start_time = time.perf_counter()
    levels = [ruby(a, b).ruby_level.value for a, b in pairs]
    ruby_duration = time.perf_counter() - start_time
    print(f"RUBY Time: {ruby_duration:.4f}s ({levels.count('GRS')}/{trials} scored on graphs)")

    # 5. Results
    overshoot = sum(b - e for e, b in zip(exact, bound)) / sum(exact)
    print("\n--- Results ---")
    print(f"Exact:    {exact_duration:.4f} seconds")
    print(f"Top-down: {bound_duration:.4f} seconds, {overshoot:.1%} above exact on average")

    if bound_duration < exact_duration:
        print(f"\nSpeedup: {exact_duration / bound_duration:.2f}x")
    else:
        print("\nNo speedup detected.")


if __name__ == "__main__":
    run_benchmark()
