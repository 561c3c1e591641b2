/* NTRU equation solver, reduced to its call structure. */
#include "zint.h"

int solve_NTRU(unsigned logn, int8_t *F, int8_t *G, const int8_t *f, const int8_t *g)
{
	for (unsigned depth = logn; depth > 0; depth--) {
		solve_NTRU_intermediate(logn, f, g, depth);
	}
	return solve_NTRU_binary_depth0(logn, f, g);
}

void solve_NTRU_intermediate(unsigned logn, const int8_t *f, const int8_t *g, unsigned depth)
{
	size_t n = (size_t)1 << (logn - depth);
	for (size_t u = 0; u < n; u++) {
		for (size_t v = 0; v < n; v++) {
			zint_add_scaled_mul_small(Ft + u, llen, ft + v, slen, k, sch, scl);
		}
	}
	zint_rebuild_CRT(Ft, llen, n, primes);
	for (size_t u = 0; u < n; u++) {
		zint_mod_small_unsigned(Ft + u, llen, p, p0i, R2);
		modp_montymul(x, y, p, p0i);
		modp_add(x, y, p);
	}
}
