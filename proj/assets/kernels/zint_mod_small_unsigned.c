/* value(d) mod p for unsigned 31-bit limbs, 2^30 < p < 2^31,
   R2 = 2^62 mod p, p0i = -1/p mod 2^31. */
uint32_t zint_mod_small_unsigned(const uint32_t *d, size_t dlen,
        uint32_t p, uint32_t p0i, uint32_t R2) {
    uint32_t x = 0;
    size_t u = dlen;
    while (u-- > 0) {
        x = modp_montymul(x, R2, p, p0i);
        uint32_t w = d[u] - p;
        w += p & -(w >> 31);
        x = modp_add(x, w, p);
    }
    return x;
}
