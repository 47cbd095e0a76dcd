#include <crjet/models.hpp>

namespace crjet::models
{

std::uint64_t SplitMix64::next()
{
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

int SplitMix64::uniform(int lo, int hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(next() % span);
}

namespace
{

struct Ambient {
    AmbientLayout lay;
    int order;

    TruncatedSeries v(int var) const { return TruncatedSeries::variable(lay.nvars(), order, var); }
    TruncatedSeries im_w() const { return (v(lay.w()) - v(lay.wbar())) * CScalar(Rational(0), Rational(-1, 2)); }
    TruncatedSeries norm2(int j) const { return v(lay.z(j)) * v(lay.zbar(j)); }
};

} // namespace

TruncatedSeries heisenberg_rho(int N, int order)
{
    const Ambient a{{N}, order};
    TruncatedSeries rho = a.im_w();
    for (int j = 0; j < N - 1; ++j) {
        rho -= a.norm2(j);
    }
    return rho;
}

TruncatedSeries m3_rho(int order)
{
    const Ambient a{{3}, order};
    const auto q = a.v(a.lay.z(0)) * a.v(a.lay.z(0)) * a.v(a.lay.zbar(1));
    const auto re = (q + conjugate(q, a.lay.pairing())) * CScalar(Rational(1, 2));
    return a.im_w() - a.norm2(0) - re;
}

TruncatedSeries cubic_rho(int order)
{
    const Ambient a{{2}, order};
    const auto z = a.v(a.lay.z(0));
    const auto zb = a.v(a.lay.zbar(0));
    return a.im_w() - z * z * zb - z * zb * zb;
}

TruncatedSeries m2_rho(int order)
{
    const Ambient a{{2}, order};
    return a.im_w() - a.norm2(0) * a.norm2(0);
}

TruncatedSeries tube_c3_rho(int order)
{
    const Ambient a{{3}, order};
    return a.im_w() - a.norm2(0);
}

TruncatedSeries flat_rho(int N, int order)
{
    const Ambient a{{N}, order};
    return a.im_w();
}

std::vector<std::string> names()
{
    return {"cubic", "flat2", "flat3", "heisenberg2", "heisenberg3", "heisenberg4", "m2", "m3", "tube3"};
}

std::pair<TruncatedSeries, int> by_name(const std::string &name, int order)
{
    if (name == "heisenberg2" || name == "heisenberg3" || name == "heisenberg4") {
        const int N = name.back() - '0';
        return {heisenberg_rho(N, order), N};
    }
    if (name == "m2") {
        return {m2_rho(order), 2};
    }
    if (name == "tube3") {
        return {tube_c3_rho(order), 3};
    }
    if (name == "m3") {
        return {m3_rho(order), 3};
    }
    if (name == "cubic") {
        return {cubic_rho(order), 2};
    }
    if (name == "flat2" || name == "flat3") {
        const int N = name.back() - '0';
        return {flat_rho(N, order), N};
    }
    throw Error("unknown model '" + name + "'");
}

Hypersurface random_hypersurface(std::uint64_t seed, int N, int order, int max_degree, int min_degree)
{
    if (min_degree < 2 || max_degree < min_degree) {
        throw Error("random hypersurfaces need 2 <= min_degree <= max_degree");
    }
    SplitMix64 rng(seed);
    const IntrinsicLayout in{N - 1};
    const int nv = in.nvars();
    TruncatedSeries q(nv, order);
    const int nterms = rng.uniform(3, 6);
    for (int t = 0; t < nterms; ++t) {
        const int deg = rng.uniform(min_degree, max_degree);
        std::vector<int> e(static_cast<std::size_t>(nv), 0);
        for (int k = 0; k < deg; ++k) {
            ++e[static_cast<std::size_t>(rng.uniform(0, nv - 1))];
        }
        const CScalar c(Rational(rng.uniform(-3, 3), rng.uniform(1, 3)), Rational(rng.uniform(-3, 3), rng.uniform(1, 3)));
        q += TruncatedSeries::monomial(nv, order, MultiIndex(e), c);
    }
    const TruncatedSeries phi = q + conjugate(q, in.pairing());
    return from_graph(phi, N);
}

} // namespace crjet::models
