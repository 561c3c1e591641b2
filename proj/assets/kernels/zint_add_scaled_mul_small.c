/* x <- x + y*k*2^(31*sch + scl), signed 31-bit limbs, little-endian,
   truncated to xlen limbs. ylen <= xlen, scl < 31. */
void zint_add_scaled_mul_small(uint32_t *x, size_t xlen,
        const uint32_t *y, size_t ylen, int32_t k, uint32_t sch, uint32_t scl) {
    uint32_t ysign = -(y[ylen - 1] >> 30) >> 1;
    uint32_t tw = 0;
    int32_t cc = 0;
    for (size_t u = sch; u < xlen; u++) {
        size_t v = u - sch;
        uint32_t wy = v < ylen ? y[v] : ysign;
        uint32_t wys = ((wy << scl) & 0x7FFFFFFF) | tw;
        tw = scl == 0 ? 0 : wy >> (31 - scl);
        int64_t z = (int64_t)wys * (int64_t)k + (int64_t)x[u] + cc;
        x[u] = (uint32_t)z & 0x7FFFFFFF;
        cc = (int32_t)(z >> 31);
    }
}
