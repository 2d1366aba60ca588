"""Print the multiplication budget table and the instrumented apFFT counts."""

from apfoe import complexity

print(f"{'N1':>6} {'N2':>6} {'FFT+CZT':>9} {'FFT+Zoom':>9} {'apFFT':>7} {'vs CZT':>7} {'vs Zoom':>7}")
for n1, n2 in complexity.STANDARD_SETTINGS:
    r = complexity.build_report(n1, n2)
    print(
        f"{n1:>6} {n2:>6} {r.mul_czt:>9} {r.mul_zoomfft:>9} {r.mul_apfft:>7}"
        f" {r.reduction_vs_czt:>7.1%} {r.reduction_vs_zoomfft:>7.1%}"
    )

print("\nexecuted by one instrumented apFFT (unit twiddles skipped):")
for n1, _ in complexity.STANDARD_SETTINGS:
    print(f"  N={n1}: {complexity.count_apfft_muls(n1)}")
