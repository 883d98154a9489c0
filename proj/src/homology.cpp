#include "bvred/homology.hpp"

#include "json.hpp"

#include <algorithm>
#include <numeric>

namespace bvred {

bool exactModeSupported(const GeneratorTable& t) {
    if (!t.hasWeights())
        return false;
    for (uint32_t i = 0; i < t.size(); ++i) {
        int w = *t.gen(i).weight;
        if (w < 0)
            return false;
        if (w == 0 && !t.odd(i))
            return false;
    }
    return true;
}

bool weightHomogeneous(const SemiFreeCdga& A) {
    const auto& t = *A.table;
    if (!t.hasWeights())
        return false;
    for (uint32_t g = 0; g < t.size(); ++g)
        for (const auto& [m, c] : A.d.onGen[g].terms())
            if (monomialWeight(t, m) != *t.gen(g).weight)
                return false;
    return true;
}

std::vector<Monomial> monomialBasis(const GeneratorTable& t, int degree,
                                    std::optional<int> weight,
                                    std::optional<int> bound,
                                    size_t sizeCap) {
    if (!bound) {
        if (!weight)
            throw Error("monomialBasis needs a weight or a total-exponent bound");
        if (!exactModeSupported(t))
            throw Error("infinite bidegree: declare positive weights or pass a bound");
    }
    std::vector<Monomial> out;
    Monomial cur;
    // DFS over generators in declaration order
    auto rec = [&](auto&& self, uint32_t i, int rdeg, int rwt, int rexp) -> void {
        if (out.size() > sizeCap)
            throw Error("basis exceeds the size cap");
        if (i == t.size()) {
            if (rdeg == 0 && (!weight || rwt == 0))
                out.push_back(cur);
            return;
        }
        const auto& g = t.gen(i);
        int wt = g.weight ? *g.weight : 0;
        int maxE;
        if (t.odd(i))
            maxE = 1;
        else if (bound)
            maxE = rexp;
        else
            maxE = (wt > 0) ? rwt / wt : 0;
        for (int e = 0; e <= maxE; ++e) {
            if (bound && e > rexp)
                break;
            if (weight) {
                int nw = rwt - e * wt;
                if (!bound && nw < 0)
                    break;
            }
            if (e > 0)
                cur.factors.emplace_back(i, uint32_t(e));
            self(self, i + 1, rdeg - e * g.degree, weight ? rwt - e * wt : 0,
                 rexp - e);
            if (e > 0)
                cur.factors.pop_back();
        }
    };
    rec(rec, 0, degree, weight.value_or(0), bound.value_or(0));
    std::sort(out.begin(), out.end());
    return out;
}

// --- sparse matrices ---------------------------------------------------------

void SparseMat::set(size_t r, size_t c, const Rational& v) {
    if (v == 0)
        return;
    auto& row = entries.at(r);
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& e, size_t col) { return e.first < col; });
    if (it != row.end() && it->first == c)
        it->second += v;
    else
        row.insert(it, {uint32_t(c), v});
}

SparseMat SparseMat::transposed() const {
    SparseMat out;
    out.rows = cols;
    out.cols = rows;
    out.entries.assign(cols, {});
    for (size_t r = 0; r < rows; ++r)
        for (const auto& [c, v] : entries[r])
            out.entries[c].emplace_back(uint32_t(r), v);
    return out;
}

namespace {

using IntRow = std::vector<std::pair<uint32_t, BigInt>>;

IntRow clearDenominators(const std::vector<std::pair<uint32_t, Rational>>& row) {
    BigInt l = 1;
    for (const auto& [c, v] : row)
        l = boost::multiprecision::lcm(l, BigInt(boost::multiprecision::denominator(v)));
    IntRow out;
    out.reserve(row.size());
    for (const auto& [c, v] : row)
        out.emplace_back(c, BigInt(boost::multiprecision::numerator(v)) *
                                (l / BigInt(boost::multiprecision::denominator(v))));
    return out;
}

// r := (p * r - m * pivotRow) / prev, entrywise, exact
IntRow bareissUpdate(const IntRow& r, const IntRow& pivotRow, const BigInt& p,
                     const BigInt& m, const BigInt& prev) {
    IntRow out;
    out.reserve(r.size() + pivotRow.size());
    size_t i = 0, j = 0;
    auto push = [&](uint32_t c, BigInt v) {
        if (v != 0)
            out.emplace_back(c, std::move(v));
    };
    while (i < r.size() || j < pivotRow.size()) {
        if (j == pivotRow.size() || (i < r.size() && r[i].first < pivotRow[j].first)) {
            push(r[i].first, p * r[i].second / prev);
            ++i;
        } else if (i == r.size() || pivotRow[j].first < r[i].first) {
            push(pivotRow[j].first, -m * pivotRow[j].second / prev);
            ++j;
        } else {
            push(r[i].first, (p * r[i].second - m * pivotRow[j].second) / prev);
            ++i, ++j;
        }
    }
    return out;
}

BigInt entryAt(const IntRow& r, uint32_t c) {
    auto it = std::lower_bound(r.begin(), r.end(), c,
                               [](const auto& e, uint32_t col) { return e.first < col; });
    return (it != r.end() && it->first == c) ? it->second : BigInt(0);
}

} // namespace

long rankFractionFree(const SparseMat& m) {
    std::vector<IntRow> rows;
    rows.reserve(m.rows);
    for (const auto& r : m.entries)
        if (!r.empty())
            rows.push_back(clearDenominators(r));
    long rank = 0;
    BigInt prev = 1;
    for (uint32_t col = 0; col < m.cols && !rows.empty(); ++col) {
        // pivot: sparsest row with a nonzero entry in this column
        size_t pick = rows.size();
        for (size_t i = 0; i < rows.size(); ++i) {
            if (entryAt(rows[i], col) != 0 &&
                (pick == rows.size() || rows[i].size() < rows[pick].size()))
                pick = i;
        }
        if (pick == rows.size())
            continue;
        IntRow pivot = std::move(rows[pick]);
        rows.erase(rows.begin() + pick);
        BigInt p = entryAt(pivot, col);
        std::vector<IntRow> next;
        next.reserve(rows.size());
        for (auto& r : rows) {
            IntRow nr = bareissUpdate(r, pivot, p, entryAt(r, col), prev);
            if (!nr.empty())
                next.push_back(std::move(nr));
        }
        rows = std::move(next);
        prev = p;
        ++rank;
    }
    return rank;
}

namespace {

using RatRow = std::map<uint32_t, Rational>;

struct Rref {
    std::vector<RatRow> rows;           // reduced rows
    std::vector<uint32_t> pivotCols;    // pivot column per row
};

Rref rrefOf(const SparseMat& m) {
    std::vector<RatRow> work;
    for (const auto& r : m.entries) {
        if (r.empty())
            continue;
        RatRow row(r.begin(), r.end());
        work.push_back(std::move(row));
    }
    Rref out;
    for (uint32_t col = 0; col < m.cols && !work.empty(); ++col) {
        size_t pick = work.size();
        for (size_t i = 0; i < work.size(); ++i) {
            auto it = work[i].begin();
            if (it != work[i].end() && it->first == col &&
                (pick == work.size() || work[i].size() < work[pick].size()))
                pick = i;
        }
        if (pick == work.size())
            continue;
        RatRow pivot = std::move(work[pick]);
        work.erase(work.begin() + pick);
        Rational pv = pivot[col];
        for (auto& [c, v] : pivot)
            v /= pv;
        for (auto& r : work) {
            auto it = r.find(col);
            if (it == r.end())
                continue;
            Rational f = it->second;
            for (const auto& [c, v] : pivot) {
                auto jt = r.find(c);
                if (jt == r.end()) {
                    r[c] = -f * v;
                } else {
                    jt->second -= f * v;
                    if (jt->second == 0)
                        r.erase(jt);
                }
            }
        }
        std::erase_if(work, [](const RatRow& r) { return r.empty(); });
        // back-substitute into already reduced rows
        for (size_t i = 0; i < out.rows.size(); ++i) {
            auto it = out.rows[i].find(col);
            if (it == out.rows[i].end())
                continue;
            Rational f = it->second;
            for (const auto& [c, v] : pivot) {
                auto jt = out.rows[i].find(c);
                if (jt == out.rows[i].end()) {
                    out.rows[i][c] = -f * v;
                } else {
                    jt->second -= f * v;
                    if (jt->second == 0)
                        out.rows[i].erase(jt);
                }
            }
        }
        out.pivotCols.push_back(col);
        out.rows.push_back(std::move(pivot));
    }
    return out;
}

} // namespace

long rankRational(SparseMat m) { return long(rrefOf(m).pivotCols.size()); }

std::vector<std::vector<Rational>> kernelBasis(const SparseMat& m) {
    Rref r = rrefOf(m);
    std::vector<bool> isPivot(m.cols, false);
    for (uint32_t c : r.pivotCols)
        isPivot[c] = true;
    std::vector<std::vector<Rational>> out;
    for (uint32_t free = 0; free < m.cols; ++free) {
        if (isPivot[free])
            continue;
        std::vector<Rational> v(m.cols, Rational(0));
        v[free] = 1;
        for (size_t i = 0; i < r.rows.size(); ++i) {
            auto it = r.rows[i].find(free);
            if (it != r.rows[i].end())
                v[r.pivotCols[i]] = -it->second;
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<std::vector<Rational>> solveLinear(const SparseMat& m,
                                                 const std::vector<Rational>& b) {
    // augmented column at index cols
    SparseMat aug = m;
    aug.cols = m.cols + 1;
    for (size_t r = 0; r < m.rows; ++r)
        if (b[r] != 0)
            aug.entries[r].emplace_back(uint32_t(m.cols), b[r]);
    Rref rr = rrefOf(aug);
    std::vector<Rational> x(m.cols, Rational(0));
    for (size_t i = 0; i < rr.pivotCols.size(); ++i) {
        if (rr.pivotCols[i] == m.cols)
            return std::nullopt; // inconsistent
        auto it = rr.rows[i].find(uint32_t(m.cols));
        x[rr.pivotCols[i]] = (it != rr.rows[i].end()) ? it->second : Rational(0);
    }
    return x;
}

// --- cohomology ----------------------------------------------------------------

SparseMat differentialMatrix(const SemiFreeCdga& A,
                             const std::vector<Monomial>& src,
                             const std::vector<Monomial>& dst) {
    std::map<Monomial, uint32_t> index;
    for (uint32_t j = 0; j < dst.size(); ++j)
        index[dst[j]] = j;
    SparseMat m;
    m.rows = dst.size();
    m.cols = src.size();
    m.entries.assign(m.rows, {});
    for (uint32_t j = 0; j < src.size(); ++j) {
        Element img = applyDerivation(A.d, Element::monomial(A.table, src[j], Rational(1)));
        for (const auto& [mono, c] : img.terms()) {
            auto it = index.find(mono);
            if (it == index.end())
                continue; // truncated away in bound mode
            m.set(it->second, j, c);
        }
    }
    return m;
}

SparseMat morphismMatrix(const CdgaMorphism& f,
                         const std::vector<Monomial>& src,
                         const std::vector<Monomial>& dst) {
    std::map<Monomial, uint32_t> index;
    for (uint32_t j = 0; j < dst.size(); ++j)
        index[dst[j]] = j;
    SparseMat m;
    m.rows = dst.size();
    m.cols = src.size();
    m.entries.assign(m.rows, {});
    for (uint32_t j = 0; j < src.size(); ++j) {
        Element img = applyMorphism(f, Element::monomial(f.source->table, src[j], Rational(1)));
        for (const auto& [mono, c] : img.terms()) {
            auto it = index.find(mono);
            if (it == index.end())
                continue;
            m.set(it->second, j, c);
        }
    }
    return m;
}

namespace {

struct Slice {
    std::vector<int> weights; // weight values to sweep (single 0 in bound mode)
    bool exact = false;
};

Slice sliceFor(const SemiFreeCdga& A, const Window& w) {
    Slice s;
    s.exact = !w.bound && exactModeSupported(*A.table) && weightHomogeneous(A);
    if (s.exact) {
        int lo = w.weightMin.value_or(0);
        int hi = w.weightMax.value_or(8);
        for (int v = lo; v <= hi; ++v)
            s.weights.push_back(v);
    } else {
        if (!w.bound)
            throw Error("window needs a total-exponent bound for this model "
                        "(weights missing, negative, or d not weight-homogeneous)");
        s.weights.push_back(0);
    }
    return s;
}

} // namespace

CohomologyReport betti(const SemiFreeCdga& A, const Window& w, bool withReps) {
    Slice slice = sliceFor(A, w);
    CohomologyReport rep;
    rep.exactByWeight = slice.exact;
    if (!slice.exact)
        rep.caveats.push_back("window-truncated: Betti numbers computed after "
                              "projection to total exponent <= " +
                              std::to_string(*w.bound));
    for (int wt : slice.weights) {
        std::optional<int> weight = slice.exact ? std::optional<int>(wt) : std::nullopt;
        std::map<int, std::vector<Monomial>> bases;
        bool capped = false;
        for (int k = w.degMin - 1; k <= w.degMax + 1; ++k) {
            try {
                bases[k] = monomialBasis(*A.table, k, weight, w.bound, w.sizeCap);
            } catch (const Error&) {
                rep.caveats.push_back("bidegree (" + std::to_string(k) + "," +
                                      std::to_string(wt) + ") exceeds the size cap");
                capped = true;
                break;
            }
        }
        if (capped)
            continue;
        std::map<int, long> ranks;
        for (int k = w.degMin - 1; k <= w.degMax; ++k)
            ranks[k] = rankFractionFree(differentialMatrix(A, bases[k], bases[k + 1]));
        for (int k = w.degMin; k <= w.degMax; ++k) {
            size_t n = bases[k].size();
            rep.basisSize[{k, wt}] = n;
            long b = long(n) - ranks[k] - ranks[k - 1];
            rep.betti[{k, wt}] = b;
            if (withReps && b > 0) {
                SparseMat dk = differentialMatrix(A, bases[k], bases[k + 1]);
                SparseMat dkm = differentialMatrix(A, bases[k - 1], bases[k]);
                auto kernel = kernelBasis(dk);
                // greedily extend the image to a basis of the cycle space
                SparseMat probe;
                probe.rows = n;
                probe.cols = 0;
                probe.entries.assign(n, {});
                auto addColumn = [&](const std::vector<Rational>& v) {
                    for (size_t r = 0; r < n; ++r)
                        if (v[r] != 0)
                            probe.entries[r].emplace_back(uint32_t(probe.cols), v[r]);
                    ++probe.cols;
                };
                for (uint32_t j = 0; j < dkm.cols; ++j) {
                    std::vector<Rational> col(n, Rational(0));
                    for (size_t r = 0; r < n; ++r)
                        for (const auto& [cc, vv] : dkm.entries[r])
                            if (cc == j)
                                col[r] = vv;
                    addColumn(col);
                }
                long base = rankRational(probe);
                for (const auto& v : kernel) {
                    addColumn(v);
                    long nr = rankRational(probe);
                    if (nr > base) {
                        base = nr;
                        Element e(A.table);
                        for (size_t i = 0; i < v.size(); ++i)
                            if (v[i] != 0)
                                e.add(bases[k][i], v[i]);
                        rep.representatives[{k, wt}].push_back(e.str());
                    } else {
                        probe.cols--;
                        for (auto& row : probe.entries)
                            while (!row.empty() && row.back().first == probe.cols)
                                row.pop_back();
                    }
                }
            }
        }
    }
    return rep;
}

QuasiIsoReport quasiIsoWindow(const CdgaMorphism& f, const Window& w) {
    QuasiIsoReport out;
    out.source = betti(*f.source, w);
    out.target = betti(*f.target, w);
    out.iso = true;
    Slice slice = sliceFor(*f.source, w);
    for (int wt : slice.weights) {
        std::optional<int> weight = slice.exact ? std::optional<int>(wt) : std::nullopt;
        for (int k = w.degMin; k <= w.degMax; ++k) {
            auto keep = [&](const CohomologyReport& r) {
                auto it = r.betti.find({k, wt});
                return it != r.betti.end() ? it->second : 0;
            };
            long bs = keep(out.source), bt = keep(out.target);
            if (bs == 0 && bt == 0)
                continue;
            auto sK = monomialBasis(*f.source->table, k, weight, w.bound, w.sizeCap);
            auto sK1 = monomialBasis(*f.source->table, k + 1, weight, w.bound, w.sizeCap);
            auto tKm = monomialBasis(*f.target->table, k - 1, weight, w.bound, w.sizeCap);
            auto tK = monomialBasis(*f.target->table, k, weight, w.bound, w.sizeCap);
            SparseMat dS = differentialMatrix(*f.source, sK, sK1);
            SparseMat dTm = differentialMatrix(*f.target, tKm, tK);
            SparseMat F = morphismMatrix(f, sK, tK);
            auto kernel = kernelBasis(dS);
            // rank of (F(Z) + im dT) / im dT
            SparseMat probe;
            probe.rows = tK.size();
            probe.entries.assign(probe.rows, {});
            probe.cols = 0;
            auto addCol = [&](const std::vector<Rational>& v) {
                for (size_t r = 0; r < probe.rows; ++r)
                    if (v[r] != 0)
                        probe.entries[r].emplace_back(uint32_t(probe.cols), v[r]);
                ++probe.cols;
            };
            for (uint32_t j = 0; j < dTm.cols; ++j) {
                std::vector<Rational> col(probe.rows, Rational(0));
                for (size_t r = 0; r < probe.rows; ++r)
                    for (const auto& [cc, vv] : dTm.entries[r])
                        if (cc == j)
                            col[r] = vv;
                addCol(col);
            }
            long imRank = rankRational(probe);
            for (const auto& z : kernel) {
                std::vector<Rational> img(probe.rows, Rational(0));
                for (size_t r = 0; r < probe.rows; ++r)
                    for (const auto& [cc, vv] : F.entries[r])
                        img[r] += vv * z[cc];
                addCol(img);
            }
            long induced = rankRational(probe) - imRank;
            if (induced != bs || induced != bt) {
                out.iso = false;
                out.failures.emplace_back(k, wt, bs, bt, induced);
            }
        }
    }
    return out;
}

std::string CohomologyReport::json() const {
    nlohmann::json j;
    j["exact_by_weight"] = exactByWeight;
    j["caveats"] = caveats;
    auto table = nlohmann::json::array();
    for (const auto& [kw, b] : betti) {
        nlohmann::json row;
        row["degree"] = kw.first;
        row["weight"] = kw.second;
        row["betti"] = b;
        auto it = basisSize.find(kw);
        if (it != basisSize.end())
            row["basis"] = it->second;
        auto rt = representatives.find(kw);
        if (rt != representatives.end())
            row["representatives"] = rt->second;
        table.push_back(row);
    }
    j["table"] = table;
    return j.dump(2);
}

} // namespace bvred
