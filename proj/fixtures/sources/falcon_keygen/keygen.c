/* Key-generation driver, reduced to its call structure. */
#include "zint.h"

int falcon_inner_keygen(unsigned logn, int8_t *f, int8_t *g, int8_t *F, int8_t *G)
{
	for (;;) {
		poly_small_mkgauss(f, logn);
		poly_small_mkgauss(g, logn);
		if (!poly_inv(f, logn)) {
			continue;
		}
		if (solve_NTRU(logn, F, G, f, g)) {
			return 1;
		}
	}
}
