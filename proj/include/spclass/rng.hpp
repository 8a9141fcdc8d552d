#pragma once

#include <cstdint>
#include <random>

namespace spclass {

// Seeded random stream. Distinct stream ids under the same seed give independent
// streams, so replicate k of a study can run as RngStream(seed, k) in any order
// and still reproduce. All variate generation routes through uniform()/normal()
// here rather than std:: distributions so draw sequences are stable.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id & 0xffffffffu),
                          static_cast<std::uint32_t>(stream_id >> 32),
                          0x9e3779b9u};
        engine_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Uniform on (0,1); never returns an endpoint.
    double uniform() {
        double u;
        do {
            u = (engine_() >> 11) * 0x1.0p-53;
        } while (u <= 0.0);
        return u;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Marsaglia polar method; the spare deviate is kept so consecutive calls
    // consume a fixed pattern of uniforms for a given acceptance history.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double v1, v2, s;
        do {
            v1 = 2.0 * uniform() - 1.0;
            v2 = 2.0 * uniform() - 1.0;
            s = v1 * v1 + v2 * v2;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v2 * f;
        have_spare_ = true;
        return v1 * f;
    }

    double normal(double mu, double sd) { return mu + sd * normal(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace spclass
