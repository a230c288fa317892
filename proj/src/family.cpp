#include "quadrep/family.hpp"

#include "quadrep/errors.hpp"

namespace quadrep {

Int oracle_box_volume(const QuadraticForm& f, long long xmax) {
    IMat adj = adjugate(f.gram);
    Int vol = 1;
    for (int i = 0; i < f.dim; ++i) {
        Int b = isqrt_floor(2 * to_int(xmax) * adj[i][i] / f.disc + 1) + 1;
        vol *= 2 * b + 1;
    }
    return vol;
}

std::vector<QuadraticForm> generate_family(const FamilySpec& spec) {
    if (spec.height < 1) fail(Err::Usage, "family height must be >= 1");
    SplitMix64 rng(spec.seed);
    std::vector<QuadraticForm> out;
    int spread = spec.k_max - spec.k_min + 1;
    long long rejections = 0;
    for (int idx = 0; idx < spec.count; ++idx) {
        int k = spec.k_min + idx % spread;
        for (;;) {
            if (++rejections > 100000)
                fail(Err::GenerationExhausted, "family generation exhausted after 1e5 draws");
            IMat m(k, IVec(k));
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) m[i][j] = to_int(rng.in_range(-spec.height, spec.height));
            IMat a = imat_mul(imat_transpose(m), m);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) a[i][j] *= 2;
            for (int i = 0; i < k; ++i) a[i][i] += to_int(2 * rng.in_range(0, spec.height));
            QuadraticForm f;
            try {
                f = validate(a, "F" + std::to_string(idx));
            } catch (const Error&) {
                continue;  // singular or indefinite draw
            }
            if (!f.primitive) continue;
            if (f.disc > spec.det_max) continue;
            if (oracle_box_volume(f, spec.oracle_xmax) > spec.oracle_volume_max) continue;
            out.push_back(std::move(f));
            break;
        }
    }
    return out;
}

}  // namespace quadrep
