// Integrates f(x, y) = x * y over the unit square with the (phi_2, phi_3)
// Halton points and reports the error and star discrepancy as N grows.

#include "mbhalton/discrepancy.hpp"
#include "mbhalton/rotation.hpp"

#include <cmath>
#include <cstdio>

int main()
{
    const int ms[] = {2, 3};
    auto cfg = mbhalton::make_halton_config(ms, 1 << 12);
    mbhalton::PointSet ps{2, {}};
    double sum = 0;
    std::printf("%8s %14s %14s\n", "N", "|error|", "D*_N");
    for (std::uint64_t n = 0; n < (1 << 12); ++n) {
        auto p = mbhalton::halton(cfg, n);
        ps.push(p);
        sum += p[0] * p[1];
        const std::uint64_t count = n + 1;
        if ((count & (count - 1)) == 0 && count >= 16)
            std::printf("%8llu %14.3e %14.3e\n", static_cast<unsigned long long>(count),
                        std::fabs(sum / double(count) - 0.25), mbhalton::star_disc_multi(ps));
    }
}
