#include "sidon/subspace.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "sidon/errors.hpp"

namespace sidon {

using Value = SmallField::Value;

namespace {

void require_same(const Subspace& u, const Subspace& v) {
    if (!u.same_ambient(v)) throw Error(Errc::AmbientMismatch, "subspaces live in different ambient fields");
}

DenseMatrix stacked(const Subspace& u, const Subspace& v) {
    DenseMatrix m(u.dim() + v.dim(), u.n());
    std::copy(u.matrix().data.begin(), u.matrix().data.end(), m.data.begin());
    std::copy(v.matrix().data.begin(), v.matrix().data.end(),
              m.data.begin() + static_cast<std::ptrdiff_t>(u.matrix().data.size()));
    return m;
}

char hex_digit(unsigned v) { return static_cast<char>(v < 10 ? '0' + v : 'a' + (v - 10)); }

unsigned hex_value(char c) {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw Error(Errc::ParseError, std::string("bad hex digit '") + c + "'");
}

}  // namespace

Subspace::Subspace(TowerPtr tower) : tower_(std::move(tower)), m_(0, tower_->n()) {}

Subspace::Subspace(TowerPtr tower, DenseMatrix rref_matrix) : tower_(std::move(tower)), m_(std::move(rref_matrix)) {}

Subspace Subspace::from_rows(TowerPtr tower, DenseMatrix rows) {
    const std::size_t n = tower->n();
    if (rows.cols != n) {
        if (rows.rows == 0) rows = DenseMatrix(0, n);
        else throw Error(Errc::AmbientMismatch, "coordinate rows have the wrong length");
    }
    const std::size_t r = rref(rows, tower->base());
    rows.truncate(r);
    return Subspace(std::move(tower), std::move(rows));
}

Subspace Subspace::span(TowerPtr tower, std::span<const FieldElement> elements) {
    const FieldTower& t = *tower;
    DenseMatrix rows(0, t.n());
    for (const auto& e : elements) {
        const auto c = t.coordinates(e.level == t.top() ? e : t.lift(e, t.top()));
        rows.append_row(c);
    }
    return from_rows(std::move(tower), std::move(rows));
}

std::vector<FieldElement> Subspace::basis() const {
    std::vector<FieldElement> out;
    out.reserve(dim());
    for (std::size_t r = 0; r < dim(); ++r) out.push_back(tower_->from_coordinates(tower_->top(), m_.row(r)));
    return out;
}

bool Subspace::contains(const FieldElement& x) const {
    const FieldTower& t = *tower_;
    DenseMatrix m = m_;
    m.append_row(t.coordinates(x.level == t.top() ? x : t.lift(x, t.top())));
    return rank(std::move(m), t.base()) == dim();
}

std::uint64_t Subspace::projective_count() const { return projective_size(q(), dim()); }

FieldElement Subspace::projective_point(std::uint64_t idx) const {
    const SmallField& f = tower_->base();
    std::vector<Value> c(dim());
    projective_vector(q(), idx, c);
    std::vector<Value> acc(n(), 0);
    for (std::size_t i = 0; i < dim(); ++i) {
        if (c[i] == 0) continue;
        const auto row = m_.row(i);
        for (std::size_t j = 0; j < n(); ++j) {
            if (row[j] != 0) acc[j] = f.add(acc[j], f.mul(c[i], row[j]));
        }
    }
    return tower_->from_coordinates(tower_->top(), acc);
}

std::string Subspace::key() const {
    std::string k = pack_coordinates(q(), m_.data);
    k.push_back(static_cast<char>(dim() & 0xFF));
    return k;
}

bool Subspace::same_ambient(const Subspace& other) const noexcept {
    return tower_ == other.tower_ || tower_->same_field(*other.tower_);
}

std::uint64_t projective_size(std::uint32_t q, std::size_t d) {
    std::uint64_t total = 0;
    std::uint64_t power = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (total > (UINT64_MAX - power)) throw Error(Errc::InvalidArgument, "projective count overflows 64 bits");
        total += power;
        if (i + 1 < d) {
            if (power > UINT64_MAX / q) throw Error(Errc::InvalidArgument, "projective count overflows 64 bits");
            power *= q;
        }
    }
    return total;
}

void projective_vector(std::uint32_t q, std::uint64_t idx, std::span<Value> out) {
    const std::size_t d = out.size();
    std::fill(out.begin(), out.end(), 0);
    std::uint64_t block = 1;
    for (std::size_t j = d; j-- > 0;) {
        if (idx < block) {
            out[j] = 1;
            for (std::size_t pos = d; pos-- > j + 1;) {
                out[pos] = static_cast<Value>(idx % q);
                idx /= q;
            }
            return;
        }
        idx -= block;
        block *= q;
    }
    throw Error(Errc::InvalidArgument, "projective index out of range");
}

Value normalize_projective(const SmallField& f, std::span<Value> v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        if (v[i] == 1) return 1;
        const Value s = f.inv(v[i]);
        for (std::size_t j = i; j < v.size(); ++j) {
            if (v[j] != 0) v[j] = f.mul(v[j], s);
        }
        return s;
    }
    return 0;
}

std::string pack_coordinates(std::uint32_t q, std::span<const Value> v) {
    std::string out;
    if (q == 2) {
        out.assign((v.size() + 7) / 8, '\0');
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] != 0) out[i / 8] = static_cast<char>(out[i / 8] | (1 << (i % 8)));
        }
        return out;
    }
    out.resize(2 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[2 * i] = static_cast<char>(v[i] & 0xFF);
        out[2 * i + 1] = static_cast<char>((v[i] >> 8) & 0xFF);
    }
    return out;
}

Subspace sum(const Subspace& u, const Subspace& v) {
    require_same(u, v);
    return Subspace::from_rows(u.tower_ptr(), stacked(u, v));
}

Subspace intersect(const Subspace& u, const Subspace& v) {
    require_same(u, v);
    // x U + y V = 0  <=>  x U = -y V lies in both spaces.
    const DenseMatrix kernel = left_kernel(stacked(u, v), u.tower().base());
    const SmallField& f = u.tower().base();
    DenseMatrix rows(kernel.rows, u.n());
    for (std::size_t r = 0; r < kernel.rows; ++r) {
        for (std::size_t i = 0; i < u.dim(); ++i) {
            const Value c = kernel.at(r, i);
            if (c == 0) continue;
            for (std::size_t j = 0; j < u.n(); ++j) rows.at(r, j) = f.add(rows.at(r, j), f.mul(c, u.matrix().at(i, j)));
        }
    }
    Subspace out = Subspace::from_rows(u.tower_ptr(), std::move(rows));
    if (sum(u, v).dim() + out.dim() != u.dim() + v.dim()) {
        throw Error(Errc::InvalidArgument, "modular law violated: linear algebra fault");
    }
    return out;
}

std::size_t intersection_dim(const Subspace& u, const Subspace& v) {
    require_same(u, v);
    return u.dim() + v.dim() - rank(stacked(u, v), u.tower().base());
}

Subspace scalar_mul(const FieldElement& alpha, const Subspace& v) {
    const FieldTower& t = v.tower();
    const FieldElement a = alpha.level == t.top() ? alpha : t.lift(alpha, t.top());
    if (t.is_zero(a)) throw Error(Errc::ZeroScalar, "scalar_mul by zero");
    DenseMatrix rows(0, v.n());
    for (const auto& b : v.basis()) rows.append_row(t.coordinates(t.mul(a, b)));
    return Subspace::from_rows(v.tower_ptr(), std::move(rows));
}

Subspace product_space(const Subspace& u, const Subspace& v) {
    require_same(u, v);
    const FieldTower& t = u.tower();
    const auto bu = u.basis();
    const auto bv = v.basis();
    DenseMatrix rows(0, u.n());
    for (const auto& a : bu) {
        for (const auto& b : bv) rows.append_row(t.coordinates(t.mul(a, b)));
    }
    return Subspace::from_rows(u.tower_ptr(), std::move(rows));
}

bool direct_sum_check(std::span<const Subspace> spaces) {
    if (spaces.empty()) throw Error(Errc::InvalidArgument, "direct_sum_check needs at least one space");
    std::size_t total = 0;
    std::size_t rows = 0;
    for (const auto& s : spaces) {
        require_same(spaces.front(), s);
        total += s.dim();
        rows += s.dim();
    }
    DenseMatrix m(rows, spaces.front().n());
    std::size_t at = 0;
    for (const auto& s : spaces) {
        std::copy(s.matrix().data.begin(), s.matrix().data.end(), m.data.begin() + static_cast<std::ptrdiff_t>(at));
        at += s.matrix().data.size();
    }
    return rank(std::move(m), spaces.front().tower().base()) == total;
}

std::size_t distance(const Subspace& u, const Subspace& v) {
    return u.dim() + v.dim() - 2 * intersection_dim(u, v);
}

nlohmann::json to_json(const Subspace& v) {
    const FieldTower& t = v.tower();
    nlohmann::json basis = nlohmann::json::array();
    nlohmann::json hex = nlohmann::json::array();
    for (const auto& b : v.basis()) {
        basis.push_back(b.coeffs);
        if (t.characteristic() == 2) {
            std::string h((b.coeffs.size() + 3) / 4, '0');
            for (std::size_t i = 0; i < b.coeffs.size(); ++i) {
                if (b.coeffs[i] == 0) continue;
                const std::size_t pos = h.size() - 1 - i / 4;
                h[pos] = hex_digit(hex_value(h[pos]) | (1U << (i % 4)));
            }
            hex.push_back(h);
        }
    }
    nlohmann::json j = {{"ambient", t.descriptor()}, {"q", t.q()}, {"n", v.n()}, {"dim", v.dim()}, {"basis", basis}};
    if (t.characteristic() == 2) j["hex"] = hex;
    return j;
}

Subspace subspace_from_json(TowerPtr tower, const nlohmann::json& j) {
    const FieldTower& t = *tower;
    const std::size_t flat = t.level(t.top()).flat_degree;
    std::vector<FieldElement> elems;
    if (j.contains("basis")) {
        for (const auto& row : j.at("basis")) elems.push_back(t.element_from_json(t.top(), row));
    } else if (j.contains("hex")) {
        if (t.characteristic() != 2) throw Error(Errc::ParseError, "hex rows require characteristic 2");
        for (const auto& row : j.at("hex")) {
            const std::string h = row.get<std::string>();
            std::vector<Coeff> c(flat, 0);
            for (std::size_t pos = 0; pos < h.size(); ++pos) {
                const unsigned v = hex_value(h[h.size() - 1 - pos]);
                for (unsigned b = 0; b < 4; ++b) {
                    if ((v >> b) & 1U) {
                        const std::size_t i = pos * 4 + b;
                        if (i >= flat) throw Error(Errc::ParseError, "hex row longer than the ambient degree");
                        c[i] = 1;
                    }
                }
            }
            elems.push_back(t.element(t.top(), std::move(c)));
        }
    } else {
        throw Error(Errc::ParseError, "subspace JSON needs 'basis' or 'hex'");
    }
    Subspace s = Subspace::span(std::move(tower), elems);
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != s.dim()) {
        throw Error(Errc::ParseError, "declared dim does not match the basis rank");
    }
    return s;
}

}  // namespace sidon
