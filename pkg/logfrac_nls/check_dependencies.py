"""Check if all dependencies for the simulator and its harness are available."""
import sys
from typing import List, Tuple


def check_dependencies() -> Tuple[bool, List[str]]:
    """
    Check required and optional dependencies.

    Returns:
        Tuple of (all_required_available, list of missing/warnings)
    """
    missing = []
    warnings = []

    try:
        import numpy
    except ImportError:
        missing.append("numpy (required for grids and FFTs)")

    try:
        import scipy.special
        import scipy.integrate
    except ImportError:
        missing.append("scipy (required for the kernel constants and the quadrature oracle)")

    try:
        from dotenv import load_dotenv
    except ImportError:
        missing.append("python-dotenv (required for config)")

    try:
        import reportlab
    except ImportError:
        warnings.append("reportlab (optional, needed for run --pdf)")

    try:
        import hypothesis
        import pytest
    except ImportError:
        warnings.append("pytest / hypothesis (optional, needed to run the test suite)")

    all_required = len(missing) == 0
    return all_required, missing + warnings


if __name__ == "__main__":
    print("Checking logfrac_nls dependencies...\n")
    all_ok, issues = check_dependencies()

    if all_ok and not issues:
        print("✅ All dependencies are available!")
    elif all_ok:
        print("✅ All required dependencies are available.")
        print("\n⚠️  Optional dependencies/warnings:")
        for issue in issues:
            print(f"   - {issue}")
    else:
        print("❌ Missing required dependencies:")
        for issue in issues:
            if "required" in issue.lower():
                print(f"   - {issue}")
        print("\n💡 Install missing dependencies with:")
        print("   pip install numpy scipy python-dotenv")
        sys.exit(1)
