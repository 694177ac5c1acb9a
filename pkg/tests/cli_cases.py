"""One quick invocation per subcommand, shared by the CLI and acceptance tests."""
import os
import subprocess
import sys

CASES = {
    "eval": ["eval", "--a", "3.2", "--x", "0.1,0.5,0.9"],
    "orbit": ["orbit", "--a", "3.2", "--x0", "0.5", "--n", "20"],
    "turning-point": ["turning-point", "--breakpoints", "0,0;0.3,1;1,0"],
    "itinerary": ["itinerary", "--a", "4", "--x0", "0.2", "--n", "12"],
    "covering": ["covering", "--a", "4", "--intervals", "0.2,0.45;0.55,0.8", "--ell", "2"],
    "misiurewicz": ["misiurewicz", "--a", "4", "--intervals", "0.2,0.45;0.55,0.8", "--ell", "2"],
    "graph-entropy": ["graph-entropy", "--matrix", "1,1;1,0"],
    "entropy": ["entropy", "--a", "4", "--n-max", "20"],
    "separation": ["separation", "--a", "4", "--eps", "0.25", "--n", "6", "--grid", "4097"],
    "dichotomy": ["dichotomy", "--a", "2.8"],
    "renormalize": ["renormalize", "--a", "3.2", "--samples", "9"],
    "renorm-depth": ["renorm-depth", "--a", "3.5"],
    "validate-periods": ["validate-periods", "--periods", "1,2,4,12,24", "--mode", "disc", "--threshold", "4"],
    "localize": ["localize", "--a", "4", "--seed", "3"],
    "periods": ["periods", "--a", "3.5", "--max-period", "8"],
    "cascade": ["cascade", "--family", "quadratic", "--levels", "8", "--format", "csv"],
    "a-star": ["a-star", "--no-cross-check"],
    "henon step": ["henon", "step", "--a", "1.4", "--b", "0.3", "--point", "0,0", "--n", "3"],
    "henon orbit": ["henon", "orbit", "--a", "0.2", "--b", "0.3", "--start", "0,0"],
    "henon periods": ["henon", "periods", "--a", "1.4", "--b", "0.3", "--max-period", "2"],
    "henon cascade": ["henon", "cascade", "--b", "0", "--levels", "3"],
    "henon gate": ["henon", "gate", "--b", "0.24"],
    "henon attractor": ["henon", "attractor", "--a", "1.4", "--b", "0.3", "--start", "0.35,0.35", "--keep", "200", "--format", "csv"],
    "prototype chain": ["prototype", "chain", "--k", "001"],
    "prototype periods": ["prototype", "periods", "--k", "001"],
    "odometer step": ["odometer", "step", "--radices", "2,2,3", "--digits", "1,1,2"],
    "odometer freq": ["odometer", "freq", "--radices", "2,2,2", "--k", "3", "--N", "8000"],
    "odometer conjugacy": ["odometer", "conjugacy", "--superstable", "5", "--k-max", "4"],
    "bifurcation": ["bifurcation", "--width", "80", "--height", "60"],
}


def run_cli(argv, out=None, env=None):
    """Run the CLI in a fresh interpreter; returns (code, stdout bytes, stderr text)."""
    cmd = [sys.executable, "-m", "renormlab", *argv]
    if out is not None:
        cmd += ["--out", str(out)]
    full_env = dict(os.environ, **(env or {}))
    proc = subprocess.run(cmd, capture_output=True, env=full_env, timeout=300)
    return proc.returncode, proc.stdout, proc.stderr.decode()
