#ifndef CRJET_INVARIANTS_HPP
#define CRJET_INVARIANTS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <crjet/diff_operator.hpp>
#include <crjet/hypersurface.hpp>

namespace crjet
{

/// Frame indices, 0-based; A stands for L_A and, in barred slots, for L_Abar.
using IndexTuple = std::vector<int>;

std::string tuple_label(const IndexTuple &t, bool barred);

/// An integer found by a bounded search, or "none up to the bound".
struct Bounded {
    std::optional<int> value;
    std::string bound_name;
    int bound = 0;

    bool finite() const { return value.has_value(); }
    /// "3" or "∞@kmax".
    std::string to_string() const;
    friend bool operator==(const Bounded &a, const Bounded &b) { return a.value == b.value; }
};

/// The form L_{Ak}bar ... L_{A1}bar theta (Lie derivatives along the barred fields).
OneForm lie_chain(const Frame &F, const IndexTuple &abar);

/// Memoized h-tensor entries h_{A1bar..Akbar D} and h_{A1bar..Akbar} for one frame.
class HTensor
{
public:
    explicit HTensor(const Frame &F);

    const Frame &frame() const { return *frame_; }
    const OneForm &chain(const IndexTuple &abar);
    /// <chain, L_D>
    const TruncatedSeries &h(const IndexTuple &abar, int D);
    /// <chain, T>
    const TruncatedSeries &h(const IndexTuple &abar);

    /// Every ordered tuple of length k over {0..n-1}.
    static std::vector<IndexTuple> tuples(int n, int k);

private:
    const Frame *frame_;
    std::map<IndexTuple, OneForm> chains_;
    std::map<std::pair<IndexTuple, int>, TruncatedSeries> hd_;
    std::map<IndexTuple, TruncatedSeries> ht_;
};

/// Value at 0 of the nested bracket <theta, [L_{Ar}bar, ...[L_{A1}bar, L_D]...]>.
CScalar nested_bracket_value(const Frame &F, const IndexTuple &abar, int D);

struct ExtrinsicReport {
    Bounded k0;
    /// dim span{Lbar^alpha rho_Z(0) : |alpha| <= k} for k = 0, 1, ...
    std::vector<int> span_dims;
};

/// Span test on the ambient gradient with commuting ambient CR fields.
ExtrinsicReport extrinsic_k0(const Hypersurface &M, int kmax);

struct FiltrationReport {
    int n = 0;
    std::vector<int> Ek_dims;
    std::vector<int> Fk_dims;
    std::vector<int> rk;
    /// Basis of F_k(0) in coordinates of the current L basis, k = 0, 1, ...
    std::vector<std::vector<std::vector<CScalar>>> Fk_bases;
    Bounded k0;
    int levi_rank = 0;
    Bounded ell0;
    /// Index tuple and D realizing ell0.
    std::optional<std::pair<IndexTuple, int>> ell0_witness;
    Bounded ell1;
    Bounded type;
};

struct FiltrationBounds {
    int kmax = 1;
    int lmax = 2;
    int typemax = 2;

    /// kmax = N - 1, lmax = typemax = kmax + 1.
    static FiltrationBounds defaults(int N);
};

FiltrationReport intrinsic_filtration(const Frame &F, const FiltrationBounds &bounds);

/// Constant change of the L_A so that the last n - r_k of them span F_k(0) at 0.
Frame adapt_frame(const Frame &F, const FiltrationReport &report);

struct Violation {
    std::string label;
    std::string residual;
};

struct IdentityReport {
    std::string name;
    bool vacuous = false;
    std::string note;
    int checked = 0;
    /// Lowest truncation order at which a residual was compared.
    int order = 0;
    std::vector<Violation> violations;

    bool passed() const { return violations.empty(); }
    /// Counts one check; records a violation unless the residual is the zero series.
    void expect_zero(const std::string &label, const TruncatedSeries &residual);
    void expect_equal(const std::string &label, const CScalar &a, const CScalar &b);
};

/// Frame duality and the four structure-function families.
IdentityReport verify_frame(const Frame &F);

/// h_{A..Cbar D} - L_Cbar h_{A..D} - h_{A..B} R^B_{Cbar D} - h_{A..} h_{Cbar D} = 0 for tuples of length <= k.
IdentityReport verify_h_recursion(const Frame &F, int k);

/// (L_C1bar..L_Cjbar h_{A1..Ar D})(0) = (L_C1bar..L_Cjbar L_Arbar h_{A1..A(r-1) D})(0) for r >= 2, r + j <= ell0.
IdentityReport verify_h_shift(const Frame &F, const Bounded &ell0);

/// <theta, nested bracket>(0) = -h(0) for r <= ell0 (r <= lmax when ell0 is infinite), and ell0 = ell1.
IdentityReport verify_bracket_values(const Frame &F, const FiltrationReport &report, int lmax);

struct ScanPoint {
    std::vector<CScalar> z;
    Rational s;
};

struct ScanResult {
    ScanPoint point;
    Rational t;
    Bounded k0;
    bool nondegenerate = false;
};

/// Extrinsic k0 at each sample point of M, recentered; requires polynomial rho and phi.
/// Points are processed by up to `threads` workers; results keep input order.
std::vector<ScanResult> nondegeneracy_scan(const Hypersurface &M, const std::vector<ScanPoint> &points, int k,
                                           int threads = 1);

/// Solved operator identity: target = base + sum_i coefficient_i * generator_i.
struct CommutatorCertificate {
    std::string target;
    std::string base;
    int weight = 0;
    std::vector<std::pair<std::string, TruncatedSeries>> coefficients;
    int checked_degree = 0;
    bool verified = false;
    std::string mismatch;
};

struct CommutatorReport {
    /// m h_{Fbar E..} L^{E minus one} T = [L^E, L_Fbar] + sum c_K L^K T
    CommutatorCertificate commutator_form;
    /// (h_{Fbar 1})^p L^J T = sum b_s^E [L^E, L_Fbar]_s, s = 0, 1
    CommutatorCertificate weighted_form;
};

/// E has m entries; F is the barred index. Needs h_{Fbar 1}(0) != 0.
CommutatorReport commutator_certificates(const Frame &F, const IndexTuple &E, int Fbar, int check_degree = 5);

} // namespace crjet

#endif
