#!/usr/bin/env python3
"""
Quick self-check for the periodic decomposition toolkit.
Run this after installing the requirements to make sure everything works.
"""

import sys


def test_imports():
    """Test that all required modules can be imported."""
    print("🧪 Testing imports...")

    for name in ('numpy', 'scipy', 'pandas', 'tqdm'):
        try:
            __import__(name)
            print(f"✅ {name} imported successfully")
        except ImportError as e:
            print(f"❌ {name} import failed: {e}")
            return False

    return True


def test_config():
    """Test that config.py holds sane defaults."""
    print("\n⚙️  Testing configuration...")

    try:
        import config
        print("✅ config.py imported successfully")

        required_attrs = ['DEFAULT_MAX_PERIOD', 'DEFAULT_MAX_ITER', 'DEFAULT_WINDOW_ITERS', 'FLOAT_DIGITS']
        for attr in required_attrs:
            if not hasattr(config, attr):
                print(f"❌ {attr} not found in config.py")
                return False
            value = getattr(config, attr)
            if isinstance(value, int) and value >= 1:
                print(f"✅ {attr} = {value}")
            else:
                print(f"❌ {attr} must be a positive integer, got {value!r}")
                return False

        if config.DEFAULT_TOL_MODE not in ('relative', 'absolute'):
            print(f"❌ DEFAULT_TOL_MODE must be 'relative' or 'absolute', got {config.DEFAULT_TOL_MODE!r}")
            return False

        return True

    except Exception as e:
        print(f"❌ config.py error: {e}")
        return False


def test_decomposition():
    """Decompose a small two-period signal and check the recovered periods."""
    print("\n🔍 Testing decomposition...")

    try:
        from csmp import csmp, periodic_spectrum
        from ramanujan import ccs_dictionary_size
        from signals import sum_of_cosines

        if ccs_dictionary_size(512) != 39927:
            print("❌ Conjugate-subspace count up to 512 is wrong")
            return False
        print("✅ Dictionary bookkeeping consistent")

        spectrum = periodic_spectrum(csmp(sum_of_cosines([5, 12], 60), max_q=30, max_iter=10))
        periods = sorted(spectrum.strengths)
        if periods == [5, 12]:
            print(f"✅ Recovered hidden periods {periods}")
            return True
        print(f"❌ Expected periods [5, 12], got {periods}")
        return False

    except Exception as e:
        print(f"❌ Decomposition test failed: {e}")
        return False


def main():
    """Run all checks."""
    print("🚀 Periodic Decomposition Toolkit - System Test")
    print("=" * 60)

    tests = [
        ("Import Test", test_imports),
        ("Configuration Test", test_config),
        ("Decomposition Test", test_decomposition),
    ]

    results = []
    for test_name, test_func in tests:
        try:
            result = test_func()
            results.append((test_name, result))
        except Exception as e:
            print(f"❌ {test_name} crashed: {e}")
            results.append((test_name, False))

    print("\n" + "=" * 60)
    print("📋 Test Summary:")

    all_passed = True
    for test_name, passed in results:
        status = "✅ PASS" if passed else "❌ FAIL"
        print(f"   {status} {test_name}")
        if not passed:
            all_passed = False

    if all_passed:
        print("\n🎉 All checks passed! You're ready to run the analysis.")
        print("\nNext steps:")
        print("   1. csmp synth --output signal.csv")
        print("   2. csmp decompose --input signal.csv -Q 100 -L 20")
        print("   3. python misc/period_study.py")
    else:
        print("\n🔧 Please fix the failing checks before proceeding.")
        print("   Check the error messages above for guidance.")
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
