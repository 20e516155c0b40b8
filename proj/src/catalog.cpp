#include "cubature/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cubature/moments.hpp"
#include "cubature/rule.hpp"

namespace cubature {

namespace {

// ---------------------------------------------------------------------------
// scalar-generic orbit expansion
// ---------------------------------------------------------------------------

template <class R>
R negated(const R& v) {
    if (v == zero_like(v)) return zero_like(v); // keep zeros sign-free for exact dedup
    return -v;
}

template <class R>
void expand_scalar(const std::vector<R>& base, int perm_from,
                   const std::vector<std::vector<int>>& sign_groups, bool global_negate,
                   std::vector<std::vector<R>>& out) {
    out.clear();
    out.push_back(base);

    for (const auto& group : sign_groups) {
        const size_t m = out.size();
        for (size_t i = 0; i < m; ++i) {
            std::vector<R> flipped = out[i];
            for (int slot : group) flipped[slot] = negated(flipped[slot]);
            out.push_back(std::move(flipped));
        }
    }

    if (perm_from >= 0) {
        std::vector<std::vector<R>> permuted;
        for (const auto& p : out) {
            std::vector<R> suffix(p.begin() + perm_from, p.end());
            std::sort(suffix.begin(), suffix.end());
            do {
                std::vector<R> q(p.begin(), p.begin() + perm_from);
                q.insert(q.end(), suffix.begin(), suffix.end());
                permuted.push_back(std::move(q));
            } while (std::next_permutation(suffix.begin(), suffix.end()));
        }
        out = std::move(permuted);
    }

    if (global_negate) {
        const size_t m = out.size();
        for (size_t i = 0; i < m; ++i) {
            std::vector<R> neg;
            neg.reserve(out[i].size());
            for (const auto& v : out[i]) neg.push_back(negated(v));
            out.push_back(std::move(neg));
        }
    }

    // duplicates only arise from zero entries or symmetric sign patterns,
    // which reproduce bit-identical vectors
    std::vector<std::vector<R>> unique;
    for (auto& p : out) {
        bool seen = false;
        for (const auto& u : unique)
            if (u == p) {
                seen = true;
                break;
            }
        if (!seen) unique.push_back(std::move(p));
    }
    out = std::move(unique);
}

// ---------------------------------------------------------------------------
// symbolic rule recipes
// ---------------------------------------------------------------------------

struct PatternSpec {
    std::vector<Expr> base;
    int perm_from = -1;
    std::vector<std::vector<int>> sign_groups;
    bool global_negate = false;
    Expr weight;
    int expected_count = 0;
};

struct FamilyVariant {
    std::vector<PatternSpec> patterns;
    std::vector<std::pair<std::string, Expr>> constants;
};

struct Family {
    std::string key;
    int n = 0;
    int degree = 0;
    bool closed_form = true;
    std::map<Region, FamilyVariant> variants;
};

using E = Expr;
E I(long v) { return E::integer(v); }
E Q(long a, long b) { return E::rational(a, b); }
E rt(long v) { return sqrt(E::integer(v)); }
E rtq(long a, long b) { return sqrt(E::rational(a, b)); }
E pih(int k) { return E::pi_half_pow(k); }
E dec(const char* s) { return E::decimal(s); }

PatternSpec pat(std::vector<Expr> base, E weight, int count, int perm_from = -1,
                std::vector<std::vector<int>> sign_groups = {}, bool global_negate = false) {
    PatternSpec p;
    p.base = std::move(base);
    p.weight = std::move(weight);
    p.expected_count = count;
    p.perm_from = perm_from;
    p.sign_groups = std::move(sign_groups);
    p.global_negate = global_negate;
    return p;
}

std::vector<Expr> zeros(int n) { return std::vector<Expr>(static_cast<size_t>(n), I(0)); }

Family family_3_10_4() {
    Family fam{"3-10-4", 3, 4, true, {}};

    auto build = [&](E a, E b, E c, E e, E f, E g, E w1c, E w2c, E w3c, E w4c, int pipow) {
        FamilyVariant v;
        E W1 = pih(pipow) * w1c, W2 = pih(pipow) * w2c, W3 = pih(pipow) * w3c, W4 = pih(pipow) * w4c;
        v.patterns = {
            pat({g, I(0), I(0)}, W3, 1),
            pat({a, c, I(0)}, W2, 4, 1, {{1}}),
            pat({-b, I(0), I(0)}, W1, 1),
            pat({-e, f, f}, W4, 4, -1, {{1}, {2}}),
        };
        v.constants = {{"a", a}, {"b", b}, {"c", c}, {"e", e}, {"f", f}, {"g", g},
                       {"W1", w1c}, {"W2", w2c}, {"W3", w3c}, {"W4", w4c}};
        return v;
    };

    fam.variants[Region::ExpR2] =
        build((rt(3) - I(1)) / I(2), (rt(7) - I(1)) / I(2), sqrt(I(3) - rt(3)),
              (rt(3) + I(1)) / I(2), sqrt((rt(3) + I(3)) / I(2)), (rt(7) + I(1)) / I(2),
              (I(2) * rt(7) + I(7)) / I(42), (rt(3) + I(2)) / I(24),
              (I(7) - I(2) * rt(7)) / I(42), (I(2) - rt(3)) / I(24), 3);

    fam.variants[Region::Ball] =
        build((I(2) * rt(3) - I(1)) / rt(77), (I(2) * rt(203) - rt(77)) / I(35),
              sqrt((I(48) - I(8) * rt(3)) / I(77)), (I(2) * rt(3) + I(1)) / rt(77),
              sqrt((I(24) + I(4) * rt(3)) / I(77)), (I(2) * rt(203) + rt(77)) / I(35),
              (I(841) + I(32) * rt(11) * rt(29)) / I(5220), I(7) * (I(13) + I(4) * rt(3)) / I(720),
              (I(841) - I(32) * rt(11) * rt(29)) / I(5220), I(7) * (I(13) - I(4) * rt(3)) / I(720),
              2);
    return fam;
}

Family family_3_11_4() {
    Family fam{"3-11-4", 3, 4, false, {}};
    FamilyVariant v;
    v.patterns = {
        pat({dec("5.123512671436"), dec("4.925613098468"), I(0)}, dec("0.379658096396"), 2, -1, {{0}}),
        pat({dec("4.102816292737"), -dec("1.218122471265"), dec("1.544992698170")},
            dec("1.815112382679"), 2, -1, {{0}}),
        pat({dec("3.636092685910"), -dec("1.218122471265"), -dec("4.843920857272")},
            dec("0.737101279022"), 2, -1, {{0}}),
        pat({I(0), -dec("1.836923221948"), I(0)}, dec("8.813498359176"), 1),
        pat({I(0), -dec("12.639707409137"), -dec("3.423767380484")}, dec("0.036648025338"), 1),
        pat({I(0), dec("1.948389609086"), -dec("1.422580596634")}, dec("7.054048788228"), 1),
        pat({I(0), dec("1.703608086180"), dec("3.398957047139")}, dec("3.331366718822"), 1),
        pat({I(0), -dec("8.635010968135"), dec("11.051160549267")}, dec("0.033435820963"), 1),
    };
    fam.variants[Region::ExpR] = std::move(v);
    return fam;
}

Family family_4_16_4a() {
    Family fam{"4-16-4a", 4, 4, true, {}};

    auto build = [&](E a, E b, E c, E e, E f, E g, E w0c, E w1c, E w2c, E r1, E r2) {
        FamilyVariant v;
        E W0 = pih(4) * w0c, W1 = pih(4) * w1c, W2 = pih(4) * w2c;
        v.patterns = {
            pat(zeros(4), W0, 1),
            pat({c, c, -b, -b}, W1, 6, 0),
            pat({-e, -a, -a, -a}, W1, 4, 0),
            pat({f, f, f, f}, W2, 1),
            pat({g, -e, -e, -e}, W2, 4, 0),
        };
        v.constants = {{"a", a}, {"b", b}, {"c", c}, {"e", e}, {"f", f}, {"g", g},
                       {"W0", w0c}, {"W1", w1c}, {"W2", w2c}, {"r1", r1}, {"r2", r2}};
        return v;
    };

    fam.variants[Region::ExpR2] =
        build((I(3) * rt(3) - rt(15)) / I(12), (rt(15) - rt(3)) / I(6), (rt(15) + rt(3)) / I(6),
              (rt(15) + rt(3)) / I(4), rt(3), (I(3) * rt(15) - rt(3)) / I(4), Q(1, 12), Q(9, 100),
              Q(1, 300), rt(2), rt(12));
    fam.variants[Region::ExpR] =
        build((I(3) * rt(42) - rt(210)) / I(12), (rt(210) - rt(42)) / I(6),
              (rt(210) + rt(42)) / I(6), (rt(210) + rt(42)) / I(4), rt(42),
              (I(3) * rt(210) - rt(42)) / I(4), Q(29, 7), Q(27, 35), Q(1, 35), rt(28), rt(168));
    fam.variants[Region::Ball] =
        build((I(3) * rt(3) - rt(15)) / I(24), (rt(15) - rt(3)) / I(12), (rt(15) + rt(3)) / I(12),
              (rt(15) + rt(3)) / I(8), rt(3) / I(2), (I(3) * rt(15) - rt(3)) / I(8), Q(-1, 9),
              Q(3, 50), Q(1, 450), rtq(1, 2), rt(3));
    return fam;
}

Family family_4_16_4b() {
    Family fam{"4-16-4b", 4, 4, true, {}};

    auto build = [&](E a, E b, E c, std::optional<E> w0c, E w1c, E w2c, E r2) {
        FamilyVariant v;
        E W1 = pih(4) * w1c, W2 = pih(4) * w2c;
        if (w0c) v.patterns.push_back(pat(zeros(4), pih(4) * *w0c, 1));
        auto rest = {
            pat({I(0), I(0), I(0), -c}, W1, 1),
            pat({I(0), I(0), c, I(0)}, W1, 1),
            pat({b, I(0), -a, I(0)}, W1, 2, -1, {{0}}),
            pat({I(0), b, I(0), a}, W1, 2, -1, {{1}}),
            pat({b, b, a, -a}, W2, 4, -1, {{0}, {1}}),
            pat({I(0), b, -c, -a}, W2, 2, -1, {{1}}),
            pat({b, I(0), a, c}, W2, 2, -1, {{0}}),
            pat({I(0), I(0), -c, c}, W2, 1),
        };
        for (auto& p : rest) v.patterns.push_back(p);
        v.constants = {{"a", a}, {"b", b}, {"c", c}, {"W1", w1c}, {"W2", w2c}, {"r1", c}, {"r2", r2}};
        if (w0c) v.constants.emplace_back("W0", *w0c);
        return v;
    };

    fam.variants[Region::ExpR2] = build(rtq(1, 2), rtq(3, 2), rt(2), Q(1, 4), Q(1, 12), Q(1, 36), I(2));
    fam.variants[Region::ExpR] = build(rt(7), rt(21), rt(28), Q(39, 7), Q(5, 7), Q(5, 21), rt(56));
    // the Ball member has zero weight on the central point, which is dropped
    fam.variants[Region::Ball] =
        build(rtq(1, 8), rtq(3, 8), rtq(1, 2), std::nullopt, Q(1, 18), Q(1, 54), I(1));
    return fam;
}

Family family_5_22_4() {
    Family fam{"5-22-4", 5, 4, true, {}};

    auto build = [&](E a, E b, E c, E e, E f, E g, E h, E w0c, E w1c, E w2c, int pipow, E r1, E r2) {
        FamilyVariant v;
        E W0 = pih(pipow) * w0c, W1 = pih(pipow) * w1c, W2 = pih(pipow) * w2c;
        v.patterns = {
            pat(zeros(5), W0, 1),
            pat({c, c, c, c, c}, W1, 1),
            pat({-h, a, a, a, a}, W1, 5, 0),
            pat({-b, -b, -b, g, g}, W2, 10, 0),
            pat({e, -f, -f, -f, -f}, W2, 5, 0),
        };
        v.constants = {{"a", a}, {"b", b}, {"c", c}, {"e", e}, {"f", f}, {"g", g}, {"h", h},
                       {"W0", w0c}, {"W1", w1c}, {"W2", w2c}, {"r1", r1}, {"r2", r2}};
        return v;
    };

    fam.variants[Region::ExpR2] =
        build((I(2) * rt(3) - rt(2)) / I(10), (I(2) * rt(3) - rt(2)) / I(5), rtq(1, 2),
              (I(4) * rt(3) - I(2) * rt(2)) / I(5), (rt(3) + I(2) * rt(2)) / I(5),
              (I(3) * rt(3) + rt(2)) / I(5), (I(8) * rt(3) + rt(2)) / I(10), Q(1, 4), Q(1, 18),
              Q(1, 36), 5, rtq(5, 2), I(2));
    fam.variants[Region::ExpR] =
        build((I(4) * rt(3) - I(2) * rt(2)) / I(5), (I(8) * rt(3) - I(4) * rt(2)) / I(5), rt(8),
              (I(16) * rt(3) - I(8) * rt(2)) / I(5), (I(4) * rt(3) + I(8) * rt(2)) / I(5),
              (I(12) * rt(3) + I(4) * rt(2)) / I(5), (I(16) * rt(3) + I(2) * rt(2)) / I(5), I(28),
              Q(8, 3), Q(4, 3), 4, rt(40), I(8));
    fam.variants[Region::Ball] =
        build((rt(6) - I(1)) / I(15), (I(2) * rt(6) - I(2)) / I(15), Q(1, 3),
              (I(4) * rt(6) - I(4)) / I(15), (rt(6) + I(4)) / I(15), (I(3) * rt(6) + I(2)) / I(15),
              (I(4) * rt(6) + I(1)) / I(15), Q(2, 105), Q(4, 105), Q(2, 105), 4, rt(5) / I(3),
              rt(8) / I(3));
    return fam;
}

Family family_6_28_4() {
    Family fam{"6-28-4", 6, 4, true, {}};

    auto build = [&](E a, E b, E c, E e, E f, E w0c, E w1c, int pipow) {
        FamilyVariant v;
        E W0 = pih(pipow) * w0c, W1 = pih(pipow) * w1c;
        v.patterns = {
            pat(zeros(6), W0, 1),
            pat({-c, e, I(0), I(0), I(0), I(0)}, W1, 2, -1, {{1}}),
            pat({-c, I(0), b, b, b, -b}, W1, 8, 2, {{2, 3, 4, 5}}),
            pat({a, -b, b, b, b, b}, W1, 2, -1, {{2, 3, 4, 5}}),
            pat({a, -b, b, b, -b, -b}, W1, 6, 2),
            pat({f, I(0), I(0), I(0), I(0), I(0)}, W1, 1),
            pat({a, b, e, I(0), I(0), I(0)}, W1, 8, 2, {{2}}),
        };
        v.constants = {{"a", a}, {"b", b}, {"c", c}, {"e", e}, {"f", f},
                       {"W0", w0c}, {"W1", w1c}, {"r", f}};
        return v;
    };

    fam.variants[Region::ExpR2] =
        build(Q(1, 2), rtq(3, 4), I(1), rt(3), I(2), Q(1, 4), Q(1, 36), 6);
    fam.variants[Region::ExpR] =
        build(rtq(9, 2), rtq(27, 2), rt(18), rt(54), rt(72), I(50), Q(70, 27), 6);
    fam.variants[Region::Ball] =
        build(rtq(1, 20), rtq(3, 20), rtq(1, 5), rtq(3, 5), rtq(4, 5), Q(1, 96), Q(5, 864), 6);
    return fam;
}

Family family_7_38_4() {
    Family fam{"7-38-4", 7, 4, false, {}};

    auto build = [&](const char* a, const char* b, const char* c, const char* e, const char* f,
                     const char* g, const char* h, const char* i, const char* w0, const char* w1,
                     const char* w2, const char* w3, const char* w4, const char* w5) {
        FamilyVariant v;
        E ea = dec(a), eb = dec(b), ec = dec(c), ee = dec(e), ef = dec(f), eg = dec(g), eh = dec(h),
          ei = dec(i);
        v.patterns = {
            pat(zeros(7), dec(w0), 1),
            pat({ec, ec, ec, ec, ec, ec, ec}, -dec(w2), 1),
            pat({-eb, -eb, -eb, -eb, -eb, -eb, -eb}, -dec(w1), 1),
            pat({ef, -ee, -ee, -ee, -ee, -ee, -ee}, dec(w3), 7, 0),
            pat({eh, ea, ea, ea, ea, ea, ea}, dec(w4), 7, 0),
            pat({-ei, -ei, eg, eg, eg, eg, eg}, dec(w5), 21, 0),
        };
        return v;
    };

    fam.variants[Region::ExpR2] =
        build("0.2286166663871", "0.2590817563916", "0.3117777721419", "0.4422503418055",
              "0.4505846393780", "0.7531484451994", "1.0981884332902", "1.8927504201541",
              "59.8014451908073", "89.9014937680773", "79.9432767398149", "11.6616239025637",
              "11.0688850060780", "0.2803313076587");
    fam.variants[Region::Ball] =
        build("0.0974824740891", "0.1104728321147", "0.1329424887288", "0.1885761793629",
              "0.1921299357884", "0.3211435760773", "0.4682691213418", "0.8070714909185",
              "5.2337832579847", "9.4465413692728", "8.4001659957515", "1.2253635397056",
              "1.1630805645052", "0.0294562546617");
    return fam;
}

Family family_4_23_5() {
    Family fam{"4-23-5", 4, 5, true, {}};

    auto build = [&](E a, E b, E c, E e, E f, E g, E h, E w0c, E w1c, E w2c) {
        FamilyVariant v;
        E W0 = pih(4) * w0c, W1 = pih(4) * w1c, W2 = pih(4) * w2c;
        v.patterns = {
            pat(zeros(4), W0, 1),
            pat({h, I(0), I(0), I(0)}, W2, 2, -1, {{0}}),
            pat({I(0), h, I(0), I(0)}, W1, 2, -1, {{1}}),
            pat({c, b, -a, c}, W1, 8, -1, {{0}, {1, 2}, {3}}),
            pat({c, b, e, I(0)}, W1, 4, -1, {{0}, {1, 2}}),
            pat({I(0), a, -g, I(0)}, W1, 2, -1, {{1, 2}}),
            pat({I(0), a, b, f}, W1, 4, -1, {{1, 2}, {3}}),
        };
        v.constants = {{"a", a}, {"b", b}, {"c", c}, {"e", e}, {"f", f}, {"g", g}, {"h", h},
                       {"W0", w0c}, {"W1", w1c}, {"W2", w2c}, {"r", h}};
        return v;
    };

    fam.variants[Region::ExpR2] = build(rtq(1, 3), rtq(2, 3), I(1), rtq(4, 3), rt(2), rtq(8, 3),
                                        rt(3), Q(1, 3), Q(1, 32), Q(1, 48));
    fam.variants[Region::ExpR] = build(rtq(14, 3), rtq(28, 3), rt(14), rtq(56, 3), rt(28),
                                       rtq(112, 3), rt(42), Q(44, 7), Q(15, 56), Q(5, 28));
    fam.variants[Region::Ball] = build(rtq(1, 12), rtq(1, 6), rtq(1, 4), rtq(1, 3), rtq(1, 2),
                                       rtq(2, 3), rtq(3, 4), Q(1, 18), Q(1, 48), Q(1, 72));
    return fam;
}

Family family_6_44_5() {
    Family fam{"6-44-5", 6, 5, false, {}};
    FamilyVariant v;
    E a = dec("4.84099298434420"), b = dec("5.40578920173885");
    E W1 = dec("274.495347525855"), W2 = dec("13.3377822289287");
    v.patterns = {
        pat({I(0), I(0), I(0), I(0), I(0), b}, W1, 12, 0, {{5}}),
        pat({a, a, a, a, a, -a}, W2, 6, 0),
        pat({a, a, a, -a, -a, -a}, W2, 20, 0),
        pat({a, -a, -a, -a, -a, -a}, W2, 6, 0),
    };
    fam.variants[Region::ExpR] = std::move(v);
    return fam;
}

Family family_2_10_6() {
    Family fam{"2-10-6", 2, 6, false, {}};
    FamilyVariant v;
    v.patterns = {
        pat({dec("3.314013565941806"), dec("2.014171295633760")}, dec("0.000757833922865"), 2, -1, {{0}}),
        pat({dec("1.411670545911536"), -dec("0.242569904073576")}, dec("0.236161927729435"), 2, -1, {{0}}),
        pat({dec("0.713033732783175"), -dec("1.432390280414699")}, dec("0.146082553662775"), 2, -1, {{0}}),
        pat({dec("0.691608815107559"), dec("0.877693534044218")}, dec("0.485399260031153"), 2, -1, {{0}}),
        pat({I(0), -dec("0.261367769356158")}, dec("1.387418367858287"), 1),
        pat({I(0), dec("2.335832264987514")}, dec("0.017371135039050"), 1),
    };
    fam.variants[Region::ExpR2] = std::move(v);
    return fam;
}

Family family_2_11_6() {
    Family fam{"2-11-6", 2, 6, false, {}};
    FamilyVariant v;
    v.patterns = {
        pat({I(0), I(0)}, dec("3.927702275194840"), 1),
        pat({I(0), dec("10.299713185154499")}, dec("0.003846684331349"), 1),
        pat({I(0), -dec("3.895765525253948")}, dec("0.474246212300936"), 1),
        pat({dec("10.311630315898372"), dec("3.397224688449697")}, dec("0.002841012046587"), 2, -1, {{0}}),
        pat({dec("6.251012172182811"), -dec("8.794364006109971")}, dec("0.002944454683352"), 2, -1, {{0}}),
        pat({dec("3.752487980256190"), -dec("1.228482827331175")}, dec("0.460111970539923"), 2, -1, {{0}}),
        pat({dec("2.312667676618243"), dec("3.141828043257887")}, dec("0.472797630406369"), 2, -1, {{0}}),
    };
    fam.variants[Region::ExpR] = std::move(v);
    return fam;
}

Family family_6_127_7() {
    Family fam{"6-127-7", 6, 7, true, {}};

    auto build = [&](E g, E c, E f, E a, E b, E e, E h, E i, E r2, E w0c, E w1c, E w2c) {
        FamilyVariant v;
        E W0 = pih(6) * w0c, W1 = pih(6) * w1c, W2 = pih(6) * w2c;
        v.patterns = {
            pat(zeros(6), W0, 1),
            pat({g, I(0), I(0), I(0), I(0), I(0)}, W1, 2, -1, {{0}}),
            pat({c, f, I(0), I(0), I(0), I(0)}, W1, 20, 1, {{0}, {1}}),
            pat({a, b, b, b, b, b}, W1, 2, -1, {}, true),
            pat({a, b, b, b, -b, -b}, W1, 20, 1, {}, true),
            pat({a, b, -b, -b, -b, -b}, W1, 10, 1, {}, true),
            pat({h, e, e, e, e, -e}, W2, 10, 1, {}, true),
            pat({h, e, e, -e, -e, -e}, W2, 20, 1, {}, true),
            pat({h, -e, -e, -e, -e, -e}, W2, 2, -1, {}, true),
            pat({I(0), i, i, I(0), I(0), I(0)}, W2, 40, 1, {{1}, {2}}),
        };
        v.constants = {{"g", g}, {"c", c}, {"f", f}, {"a", a}, {"b", b}, {"e", e}, {"h", h},
                       {"i", i}, {"r2", r2}, {"W0", w0c}, {"W1", w1c}, {"W2", w2c}};
        return v;
    };

    {
        E q4 = I(4) - rt(6), q6 = I(6) + rt(6);
        fam.variants[Region::ExpR2] =
            build(sqrt(q4 * I(2)), sqrt(q4 / I(2)), sqrt(q4 * Q(3, 2)), sqrt(q4 / I(8)),
                  sqrt(q4 * Q(3, 8)), sqrt(q6 / I(8)), sqrt(q6 * Q(3, 8)), sqrt(q6 / I(2)),
                  sqrt(q6), (I(16) - rt(6)) / I(100), (I(68) + I(27) * rt(6)) / I(9000),
                  (I(54) - I(19) * rt(6)) / I(9000));
    }
    fam.variants[Region::Ball] =
        build(rtq(2, 3), rtq(1, 6), rtq(1, 2), rtq(1, 24), rtq(1, 8), rtq(1, 8), rtq(3, 8),
              rtq(1, 2), I(1), Q(1, 240), Q(1, 480), Q(1, 1440));
    return fam;
}

Family family_7_183_7() {
    Family fam{"7-183-7", 7, 7, true, {}};

    auto build = [&](E m, E c, E k, E f, E i, E a, E e, E j, E p, E b, E g, E h, E o, E l, E r2,
                     E w0c, E w1c, E w2c, int pipow) {
        FamilyVariant v;
        E W0 = pih(pipow) * w0c, W1 = pih(pipow) * w1c, W2 = pih(pipow) * w2c;
        auto z5 = [&](std::vector<Expr> head) {
            while (head.size() < 7) head.push_back(I(0));
            return head;
        };
        v.patterns = {
            pat(zeros(7), W0, 1),
            pat(z5({-m}), W1, 2, -1, {}, true),
            pat(z5({-c, k}), W1, 2, -1, {}, true),
            pat(z5({-c, -f, i}), W1, 20, 2, {{2}}, true),
            pat({-c, a, e, e, e, e, e}, W1, 2, -1, {}, true),
            pat({-c, a, e, e, e, -e, -e}, W1, 20, 2, {}, true),
            pat({-c, a, e, -e, -e, -e, -e}, W1, 10, 2, {}, true),
            pat(z5({j, p}), W2, 2, -1, {}, true),
            pat({j, b, g, g, g, g, g}, W2, 2, -1, {}, true),
            pat({j, b, g, g, g, -g, -g}, W2, 20, 2, {}, true),
            pat({j, b, g, -g, -g, -g, -g}, W2, 10, 2, {}, true),
            pat(z5({j, -h, o}), W2, 20, 2, {{2}}, true),
            pat({I(0), l, g, g, g, g, -g}, W2, 10, 2, {}, true),
            pat({I(0), l, g, g, -g, -g, -g}, W2, 20, 2, {}, true),
            pat({I(0), l, -g, -g, -g, -g, -g}, W2, 2, -1, {}, true),
            pat(z5({I(0), I(0), o, o}), W2, 40, 2, {{2}, {3}}),
        };
        v.constants = {{"m", m}, {"c", c}, {"k", k}, {"f", f}, {"i", i}, {"a", a}, {"e", e},
                       {"j", j}, {"p", p}, {"b", b}, {"g", g}, {"h", h}, {"o", o}, {"l", l},
                       {"r2", r2}, {"W0", w0c}, {"W1", w1c}, {"W2", w2c}};
        return v;
    };

    {
        E q = I(9) - I(4) * rt(3), u = rt(3) + I(6);
        fam.variants[Region::ExpR2] =
            build(sqrt(q * Q(3, 2)), sqrt(q / I(6)), sqrt(q * Q(4, 3)), sqrt(q / I(3)), sqrt(q),
                  sqrt(q / I(12)), sqrt(q / I(4)), sqrt(u / I(3)), sqrt(u * Q(2, 3)),
                  sqrt(u / I(24)), sqrt(u / I(8)), sqrt(u / I(6)), sqrt(u / I(2)),
                  sqrt(u * Q(3, 8)), sqrt(u), (I(144) - I(35) * rt(3)) / I(1089),
                  (I(675) + I(388) * rt(3)) / I(95832), (I(90) - I(37) * rt(3)) / I(23958), 7);
    }
    {
        E q = I(117) - I(4) * rt(78), u = rt(78) + I(78);
        fam.variants[Region::Ball] =
            build(sqrt(q * Q(3, 377)), sqrt(q / I(1131)), sqrt(q * Q(8, 1131)),
                  sqrt(q * Q(2, 1131)), sqrt(q * Q(2, 377)), sqrt(q / I(2262)), sqrt(q / I(754)),
                  sqrt(u / I(273)), sqrt(u * Q(2, 273)), sqrt(u / I(2184)), sqrt(u / I(728)),
                  sqrt(u / I(546)), sqrt(u / I(182)), sqrt(u * Q(3, 728)), sqrt(u / I(91)),
                  (I(6912) - I(224) * rt(78)) / I(2264031),
                  (I(104598) + I(8680) * rt(78)) / I(124521705),
                  (I(101088) - I(3760) * rt(78)) / I(124521705), 6);
    }
    return fam;
}

const std::vector<Family>& families() {
    static const std::vector<Family> fams = [] {
        std::vector<Family> f;
        f.push_back(family_3_10_4());
        f.push_back(family_3_11_4());
        f.push_back(family_4_16_4a());
        f.push_back(family_4_16_4b());
        f.push_back(family_5_22_4());
        f.push_back(family_6_28_4());
        f.push_back(family_7_38_4());
        f.push_back(family_4_23_5());
        f.push_back(family_6_44_5());
        f.push_back(family_2_10_6());
        f.push_back(family_2_11_6());
        f.push_back(family_6_127_7());
        f.push_back(family_7_183_7());
        return f;
    }();
    return fams;
}

std::string entry_id(const Family& fam, Region region, int points) {
    std::string prefix;
    switch (region) {
        case Region::ExpR2: prefix = "e" + std::to_string(fam.n) + "r2"; break;
        case Region::ExpR: prefix = "e" + std::to_string(fam.n) + "r1"; break;
        case Region::Ball: prefix = "s" + std::to_string(fam.n); break;
        default: throw std::logic_error("catalog regions are ExpR2/ExpR/Ball");
    }
    std::string id = prefix + "-" + std::to_string(points) + "-" + std::to_string(fam.degree);
    // the two 16-point degree-4 families collide on (region, N, d); the
    // 15-point ball member of the second family does not
    char suffix = fam.key.back();
    if ((suffix == 'a' || suffix == 'b') && points == 16) id += suffix;
    return id;
}

int variant_point_count(const FamilyVariant& v) {
    int c = 0;
    for (const auto& p : v.patterns) c += p.expected_count;
    return c;
}

template <class R>
RuleT<R> build_variant(const Family& fam, Region region, const FamilyVariant& var,
                       mpfr_prec_t prec, bool as_double) {
    RuleT<R> rule;
    rule.region = region;
    rule.n = fam.n;
    rule.claimed_degree = fam.degree;
    rule.provenance = entry_id(fam, region, variant_point_count(var));

    for (const auto& ps : var.patterns) {
        std::vector<R> base;
        base.reserve(ps.base.size());
        for (const auto& ex : ps.base) {
            if constexpr (std::is_same_v<R, double>)
                base.push_back(ex.eval_double());
            else
                base.push_back(ex.eval(prec));
        }
        R w = [&] {
            if constexpr (std::is_same_v<R, double>)
                return ps.weight.eval_double();
            else
                return ps.weight.eval(prec);
        }();
        std::vector<std::vector<R>> pts;
        expand_scalar(base, ps.perm_from, ps.sign_groups, ps.global_negate, pts);
        if (static_cast<int>(pts.size()) != ps.expected_count)
            throw std::logic_error("catalog " + rule.provenance + ": orbit size " +
                                   std::to_string(pts.size()) + " != expected " +
                                   std::to_string(ps.expected_count));
        for (auto& p : pts) {
            for (auto& x : p) rule.points.push_back(std::move(x));
            rule.weights.push_back(w);
        }
    }
    (void)as_double;
    return rule;
}

struct EntryIndex {
    std::vector<CatalogEntry> entries;
    std::map<std::string, std::pair<const Family*, Region>> by_id;
};

const EntryIndex& entry_index() {
    static const EntryIndex idx = [] {
        EntryIndex ix;
        const Region order[] = {Region::ExpR2, Region::ExpR, Region::Ball};
        for (const auto& fam : families())
            for (Region r : order) {
                auto it = fam.variants.find(r);
                if (it == fam.variants.end()) continue;
                CatalogEntry e;
                e.family = fam.key;
                e.region = r;
                e.n = fam.n;
                e.degree = fam.degree;
                e.expected_points = variant_point_count(it->second);
                e.closed_form = fam.closed_form;
                e.id = entry_id(fam, r, e.expected_points);
                ix.by_id[e.id] = {&fam, r};
                ix.entries.push_back(std::move(e));
            }
        return ix;
    }();
    return idx;
}

} // namespace

std::vector<std::pair<std::vector<double>, double>> expand_generator(const GeneratorPattern& p) {
    std::vector<std::vector<double>> pts;
    expand_scalar(p.base, p.perm_from, p.sign_groups, p.global_negate, pts);
    std::vector<std::pair<std::vector<double>, double>> out;
    out.reserve(pts.size());
    for (auto& q : pts) out.emplace_back(std::move(q), p.weight);
    return out;
}

void simplex_ab(int n, SimplexVariant variant, double& a, double& b) {
    const double s = std::sqrt(n + 1.0);
    if (variant == SimplexVariant::simple_a) {
        a = (-1.0 + (n - 1) * s) / n;
        b = (-1.0 - s) / n;
    } else {
        a = (-1.0 - (n - 1) * s) / n;
        b = (-1.0 + s) / n;
    }
}

Rule simplex_rule(Region region, int n, SimplexVariant variant) {
    if (n < 1) throw std::invalid_argument("simplex_rule: n must be >= 1");
    Region moment_region = region == Region::GaussianProb ? Region::ExpR2 : region;

    // vertex matrix chi with sum_i chi_i chi_i' = (n+1) I
    std::vector<double> chi(static_cast<size_t>(n + 1) * n, 0.0);
    if (variant == SimplexVariant::classical) {
        const double s = std::sqrt(n + 1.0);
        for (int c = 0; c < n; ++c) chi[c] = s * std::sqrt(1.0 / ((c + 1.0) * (c + 2.0)));
        for (int r = 1; r <= n; ++r)
            for (int c = 0; c < n; ++c) {
                if (c > r - 1)
                    chi[static_cast<size_t>(r) * n + c] = s * std::sqrt(1.0 / ((c + 1.0) * (c + 2.0)));
                else if (c == r - 1)
                    chi[static_cast<size_t>(r) * n + c] = -s * std::sqrt(r / (r + 1.0));
            }
    } else {
        double a = 0.0, b = 0.0;
        simplex_ab(n, variant, a, b);
        for (int c = 0; c < n; ++c) chi[c] = 1.0;
        for (int r = 1; r <= n; ++r)
            for (int c = 0; c < n; ++c)
                chi[static_cast<size_t>(r) * n + c] = (c == r - 1) ? a : b;
    }

    const double V = volume(moment_region, n);
    MultiIndex m2(std::vector<int>(n, 0));
    m2.e[0] = 2;
    const double scale = std::sqrt(monomial_moment(moment_region, n, m2) / V);

    Rule rule;
    rule.region = moment_region;
    rule.n = n;
    rule.claimed_degree = 2;
    rule.provenance = "simplex-" + std::to_string(n);
    rule.points.resize(chi.size());
    for (size_t i = 0; i < chi.size(); ++i) rule.points[i] = scale * chi[i];
    rule.weights.assign(n + 1, V / (n + 1));

    if (region == Region::GaussianProb) rule = convert_from_gaussian(rule);
    return rule;
}

const std::vector<CatalogEntry>& catalog_entries() { return entry_index().entries; }

const CatalogEntry* catalog_find(const std::string& id) {
    for (const auto& e : catalog_entries())
        if (e.id == id) return &e;
    return nullptr;
}

Rule build_catalog_rule(const std::string& id) {
    auto it = entry_index().by_id.find(id);
    if (it == entry_index().by_id.end())
        throw std::invalid_argument("unknown catalog rule '" + id + "'");
    const auto& [fam, region] = it->second;
    return build_variant<double>(*fam, region, fam->variants.at(region), 0, true);
}

RuleT<Real> build_catalog_rule_ext(const std::string& id, int digits) {
    auto it = entry_index().by_id.find(id);
    if (it == entry_index().by_id.end())
        throw std::invalid_argument("unknown catalog rule '" + id + "'");
    const auto& [fam, region] = it->second;
    return build_variant<Real>(*fam, region, fam->variants.at(region),
                               Real::bits_for_digits(digits), false);
}

Rule build_family_rule(const std::string& family, Region region) {
    for (const auto& fam : families())
        if (fam.key == family) {
            auto it = fam.variants.find(region);
            if (it == fam.variants.end())
                throw std::invalid_argument("rule family '" + family + "' was not published for " +
                                            region_name(region));
            return build_variant<double>(fam, region, it->second, 0, true);
        }
    throw std::invalid_argument("unknown rule family '" + family + "'");
}

std::vector<std::pair<std::string, Expr>> catalog_constants(const std::string& id) {
    auto it = entry_index().by_id.find(id);
    if (it == entry_index().by_id.end())
        throw std::invalid_argument("unknown catalog rule '" + id + "'");
    const auto& [fam, region] = it->second;
    return fam->variants.at(region).constants;
}

} // namespace cubature
