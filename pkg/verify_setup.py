"""Verify the simulator setup is complete and working."""
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))


def main():
    """Run verification checks."""
    print("=" * 70)
    print("logfrac_nls Setup Verification")
    print("=" * 70)
    print()

    all_checks_passed = True

    # Check 1: Python version
    print("1. Checking Python version...")
    if sys.version_info >= (3, 8):
        print(f"   [OK] Python {sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}")
    else:
        print(f"   [FAIL] Python {sys.version_info.major}.{sys.version_info.minor} (requires 3.8+)")
        all_checks_passed = False
    print()

    # Check 2: Required dependencies
    print("2. Checking required dependencies...")
    required = {
        "numpy": "arrays and FFTs",
        "scipy": "gamma/zeta functions and quadrature",
        "dotenv": "python-dotenv (environment variables)",
    }
    missing_required = []
    for module, desc in required.items():
        try:
            __import__(module)
            print(f"   [OK] {module} - {desc}")
        except ImportError:
            print(f"   [FAIL] {module} - {desc} (MISSING)")
            missing_required.append("python-dotenv" if module == "dotenv" else module)
            all_checks_passed = False
    if missing_required:
        print(f"\n   [TIP] Install with: pip install {' '.join(missing_required)}")
    print()

    # Check 3: Optional dependencies
    print("3. Checking optional dependencies...")
    optional = {
        "reportlab": "PDF reports (run --pdf)",
        "pytest": "test runner",
        "hypothesis": "property-based tests",
    }
    missing_optional = []
    for module, desc in optional.items():
        try:
            __import__(module)
            print(f"   [OK] {module} - {desc}")
        except ImportError:
            print(f"   [WARN] {module} - {desc} (optional)")
            missing_optional.append(module)
    if missing_optional:
        print(f"\n   [TIP] Install optional deps: pip install {' '.join(missing_optional)}")
    print()

    # Check 4: Package import
    print("4. Checking logfrac_nls modules...")
    try:
        from logfrac_nls import EXPERIMENTS
        print(f"   [OK] All modules import successfully ({len(EXPERIMENTS)} experiments registered)")
    except ImportError as e:
        print(f"   [FAIL] Import failed: {e}")
        all_checks_passed = False
        EXPERIMENTS = None
    print()

    # Check 5: A quick numerical smoke test
    print("5. Running a numerical smoke test...")
    if EXPERIMENTS is not None:
        try:
            import numpy as np
            from logfrac_nls import SimParams, evolve, make_grid, mass
            from logfrac_nls.initial_data import gaussian

            grid = make_grid(1, 128, 32.0)
            phi = gaussian(grid)
            traj = evolve(phi, SimParams(s=0.5, lam=-1.0, eps=0.1, dt=1e-2, T=0.1, sample_every=5))
            drift = abs(mass(traj.final) - mass(phi)) / mass(phi)
            if drift < 1e-12:
                print(f"   [OK] 10 split steps, relative mass drift {drift:.1e}")
            else:
                print(f"   [FAIL] Relative mass drift {drift:.1e} after 10 steps")
                all_checks_passed = False
        except Exception as e:
            print(f"   [FAIL] Smoke test raised: {e}")
            all_checks_passed = False
    else:
        print("   [WARN] Skipped (package did not import)")
    print()

    # Check 6: .env
    print("6. Checking for .env...")
    if (ROOT / ".env").exists():
        print("   [OK] Found .env (see ENV_FILE_REFERENCE.md)")
    else:
        print("   [WARN] No .env found; built-in defaults will be used")
    print()

    print("=" * 70)
    if all_checks_passed:
        print("[SUCCESS] All required checks passed! The simulator is ready to use.")
        print()
        print("Next steps:")
        print("  1. python -m logfrac_nls list")
        print("  2. python -m logfrac_nls run conservation")
        print("  3. python -m logfrac_nls check")
    else:
        print("[FAIL] Some checks failed. Please fix the issues above.")
        if missing_required:
            print(f"  pip install {' '.join(missing_required)}")
    print("=" * 70)

    return 0 if all_checks_passed else 1


if __name__ == "__main__":
    sys.exit(main())
