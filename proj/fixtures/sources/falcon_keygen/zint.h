#include <stddef.h>
#include <stdint.h>

void zint_add_mul_small(uint32_t *m, const uint32_t *x, size_t len, uint32_t s);
void zint_add_scaled_mul_small(uint32_t *x, size_t xlen, const uint32_t *y, size_t ylen,
	int32_t k, uint32_t sch, uint32_t scl);
uint32_t zint_mod_small_unsigned(const uint32_t *d, size_t dlen, uint32_t p, uint32_t p0i,
	uint32_t R2);
uint32_t modp_montymul(uint32_t a, uint32_t b, uint32_t p, uint32_t p0i);
uint32_t modp_add(uint32_t a, uint32_t b, uint32_t p);
