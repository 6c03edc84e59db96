#include "qdom/kraus.hpp"

#include "qdom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

namespace qdom::cp {

// --- KrausMap ----------------------------------------------------------------

KrausMap::KrausMap(AlgebraSignature source, AlgebraSignature target,
                   std::vector<KrausItem> items)
    : source_(std::move(source)), target_(std::move(target)), items_(std::move(items)) {
    for (const auto& it : items_) {
        if (it.src_block >= source_.num_blocks() || it.dst_block >= target_.num_blocks())
            throw DomainError("Kraus item block index out of range");
        if (it.k.rows() != source_.block_dim(it.src_block) ||
            it.k.cols() != target_.block_dim(it.dst_block))
            throw DomainError("Kraus item has shape " + std::to_string(it.k.rows()) + "x" +
                              std::to_string(it.k.cols()) + ", expected dim(src) x dim(dst)");
    }
}

KrausMap KrausMap::identity(const AlgebraSignature& sig) {
    std::vector<KrausItem> items;
    for (std::size_t b = 0; b < sig.num_blocks(); ++b)
        items.push_back({b, b, Matrix::identity(sig.block_dim(b))});
    return KrausMap(sig, sig, std::move(items));
}

KrausMap KrausMap::zero(const AlgebraSignature& source, const AlgebraSignature& target) {
    return KrausMap(source, target, {});
}

KrausMap KrausMap::unitary_conjugation(const AlgebraSignature& sig,
                                       const std::vector<Matrix>& unitaries) {
    if (unitaries.size() != sig.num_blocks())
        throw DomainError("unitary_conjugation: one unitary per block required");
    std::vector<KrausItem> items;
    for (std::size_t b = 0; b < sig.num_blocks(); ++b) {
        if (unitaries[b].dim() != sig.block_dim(b))
            throw DomainError("unitary_conjugation: dimension mismatch in block " +
                              std::to_string(b));
        items.push_back({b, b, unitaries[b]});
    }
    return KrausMap(sig, sig, std::move(items));
}

AlgebraElement KrausMap::apply(const AlgebraElement& x) const {
    if (x.signature() != source_) throw DomainError("KrausMap::apply: signature mismatch");
    AlgebraElement out(target_);
    for (const auto& it : items_)
        out.block(it.dst_block) += it.k.adjoint() * x.block(it.src_block) * it.k;
    return out;
}

AlgebraElement KrausMap::unit_image() const {
    return apply(AlgebraElement::unit(source_));
}

bool KrausMap::sub_unital(double tol) const {
    const auto f1 = unit_image();
    return wstar::is_positive(f1, tol) &&
           wstar::loewner_leq(f1, AlgebraElement::unit(target_), tol);
}

bool KrausMap::unital(double tol) const {
    const auto d = unit_image() - AlgebraElement::unit(target_);
    return wstar::norm(d) <= tol;
}

KrausMap KrausMap::scaled(double factor) const {
    if (factor < 0) throw DomainError("KrausMap::scaled: negative factor");
    const double root = std::sqrt(factor);
    auto items = items_;
    for (auto& it : items) it.k *= Complex(root, 0);
    return KrausMap(source_, target_, std::move(items));
}

KrausMap KrausMap::convex_sum(double p, const KrausMap& a, const KrausMap& b) {
    if (p < 0 || p > 1) throw DomainError("convex_sum: p outside [0,1]");
    if (a.source() != b.source() || a.target() != b.target())
        throw DomainError("convex_sum: signature mismatch");
    const KrausMap left = a.scaled(p);
    const KrausMap right = b.scaled(1 - p);
    auto items = left.items();
    items.insert(items.end(), right.items().begin(), right.items().end());
    return KrausMap(a.source(), a.target(), std::move(items));
}

// --- Transfer ------------------------------------------------------------------

Transfer::Transfer(AlgebraSignature source, AlgebraSignature target)
    : source_(std::move(source)),
      target_(std::move(target)),
      m_(target_.entry_dim(), source_.entry_dim()) {}

Transfer::Transfer(AlgebraSignature source, AlgebraSignature target, Matrix m)
    : source_(std::move(source)), target_(std::move(target)), m_(std::move(m)) {
    if (m_.rows() != target_.entry_dim() || m_.cols() != source_.entry_dim())
        throw DomainError("transfer matrix shape mismatch");
}

Transfer Transfer::from_action(const std::function<AlgebraElement(const AlgebraElement&)>& act,
                               const AlgebraSignature& source, const AlgebraSignature& target) {
    Transfer t(source, target);
    const auto basis = wstar::basis_elements(source);
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const auto img = wstar::stack(act(basis[col]));
        for (std::size_t row = 0; row < img.size(); ++row) t.m_.at(row, col) = img[row];
    }
    return t;
}

Transfer Transfer::from_kraus(const KrausMap& f) {
    return from_action([&f](const AlgebraElement& x) { return f.apply(x); }, f.source(),
                       f.target());
}

Transfer Transfer::identity(const AlgebraSignature& sig) {
    return Transfer(sig, sig, Matrix::identity(sig.entry_dim()));
}

AlgebraElement Transfer::apply(const AlgebraElement& x) const {
    if (x.signature() != source_) throw DomainError("Transfer::apply: signature mismatch");
    return wstar::unstack(target_, mat::apply_vec(m_, wstar::stack(x)));
}

AlgebraElement Transfer::unit_image() const {
    return apply(AlgebraElement::unit(source_));
}

Transfer& Transfer::operator+=(const Transfer& o) {
    if (source_ != o.source_ || target_ != o.target_) throw DomainError("transfer shape mismatch");
    m_ += o.m_;
    return *this;
}

Transfer& Transfer::operator-=(const Transfer& o) {
    if (source_ != o.source_ || target_ != o.target_) throw DomainError("transfer shape mismatch");
    m_ -= o.m_;
    return *this;
}

Transfer& Transfer::operator*=(Complex s) {
    m_ *= s;
    return *this;
}

double distance(const Transfer& a, const Transfer& b) {
    return mat::frobenius_norm(a.matrix() - b.matrix());
}

KrausMap compose(const KrausMap& f, const KrausMap& g) {
    if (f.target() != g.source()) throw DomainError("compose: middle signature mismatch");
    std::vector<KrausItem> items;
    for (const auto& fi : f.items())
        for (const auto& gi : g.items())
            if (fi.dst_block == gi.src_block)
                items.push_back({fi.src_block, gi.dst_block, fi.k * gi.k});
    return KrausMap(f.source(), g.target(), std::move(items));
}

Transfer compose(const Transfer& f, const Transfer& g) {
    if (f.target() != g.source()) throw DomainError("compose: middle signature mismatch");
    return Transfer(f.source(), g.target(), g.matrix() * f.matrix());
}

// --- Choi ---------------------------------------------------------------------

std::vector<Matrix> choi_blocks(const Transfer& t) {
    const auto& src = t.source();
    const auto& dst = t.target();
    std::vector<Matrix> blocks;
    for (std::size_t s = 0; s < src.num_blocks(); ++s) {
        const std::size_t ns = src.block_dim(s);
        const std::size_t s_off = src.entry_offset(s);
        for (std::size_t d = 0; d < dst.num_blocks(); ++d) {
            const std::size_t nd = dst.block_dim(d);
            const std::size_t d_off = dst.entry_offset(d);
            Matrix c(ns * nd, ns * nd);
            for (std::size_t i = 0; i < ns; ++i)
                for (std::size_t j = 0; j < ns; ++j) {
                    // Column of E_ij^{(s)}; its block-d image fills the (i,j)
                    // sub-block of the Choi matrix.
                    const std::size_t col = s_off + i * ns + j;
                    for (std::size_t a = 0; a < nd; ++a)
                        for (std::size_t b = 0; b < nd; ++b)
                            c.at(i * nd + a, j * nd + b) =
                                t.matrix().at(d_off + a * nd + b, col);
                }
            blocks.push_back(std::move(c));
        }
    }
    return blocks;
}

bool is_completely_positive(const Transfer& t, double tol) {
    for (const auto& c : choi_blocks(t))
        if (!mat::is_positive(c, tol).positive) return false;
    return true;
}

// --- classification ----------------------------------------------------------

MapClass classify(const KrausMap& f, double tol, Rng* rng) {
    MapClass out;
    out.psu = f.sub_unital(tol);
    out.pu = out.psu && f.unital(tol);
    if (!out.pu) return out;

    Rng local(0x5EED);
    Rng& r = rng ? *rng : local;
    bool multiplicative = true, involutive = true;

    const auto basis = wstar::basis_elements(f.source());
    const auto check_pair = [&](const AlgebraElement& x, const AlgebraElement& y) {
        const auto lhs = f.apply(x * y);
        const auto rhs = f.apply(x) * f.apply(y);
        if (wstar::stack_norm(lhs - rhs) > tol * 10) multiplicative = false;
    };
    if (basis.size() <= 16) {
        for (const auto& x : basis)
            for (const auto& y : basis) {
                if (!multiplicative) break;
                check_pair(x, y);
            }
    } else {
        for (int k = 0; k < 200 && multiplicative; ++k) {
            const auto x = wstar::random_element(r, f.source());
            const auto y = wstar::random_element(r, f.source());
            check_pair(x, y);
        }
    }
    for (int k = 0; k < 32 && involutive; ++k) {
        const auto x = wstar::random_element(r, f.source());
        if (wstar::stack_norm(f.apply(x.adjoint()) - f.apply(x).adjoint()) > tol * 10)
            involutive = false;
    }
    out.miu = multiplicative && involutive;
    return out;
}

// --- order ---------------------------------------------------------------------

MapOrderVerdict loewner_leq_transfers(const Transfer& f, const Transfer& g, double tol,
                                      OrderMode mode, Rng* rng, std::size_t samples) {
    if (f.source() != g.source() || f.target() != g.target())
        throw DomainError("map order: signature mismatch");
    if (mode == OrderMode::choi) {
        const bool cp = is_completely_positive(g - f, tol);
        return {cp, mode,
                "difference tested for complete positivity; sufficient for the pointwise "
                "order, not necessary"};
    }
    Rng local(0xDEC0DE);
    Rng& r = rng ? *rng : local;
    for (std::size_t k = 0; k < samples; ++k) {
        const auto x = wstar::random_psd_element(r, f.source());
        if (!wstar::loewner_leq(f.apply(x), g.apply(x), tol))
            return {false, mode, "violated on a sampled positive input"};
    }
    return {true, mode, "no violation on sampled positive inputs; sound falsifier only"};
}

MapOrderVerdict loewner_leq_maps(const KrausMap& f, const KrausMap& g, double tol,
                                 OrderMode mode, Rng* rng, std::size_t samples) {
    return loewner_leq_transfers(Transfer::from_kraus(f), Transfer::from_kraus(g), tol, mode,
                                 rng, samples);
}

MapLubResult lub_monotone_maps(const std::function<KrausMap(long)>& seq, double tol,
                               const MapLubOptions& opt) {
    KrausMap first = seq(0);
    if (!first.sub_unital(tol))
        throw DomainError("lub_monotone_maps: sequence member not sub-unital");
    Transfer prev = Transfer::from_kraus(first);
    std::vector<Transfer> prefix{prev};

    for (long k = 1; k <= opt.max_iterations; ++k) {
        const KrausMap fk = seq(k);
        const Transfer next = Transfer::from_kraus(fk);
        if (k <= opt.monotone_checks) {
            if (!fk.sub_unital(tol))
                throw DomainError("lub_monotone_maps: sequence member not sub-unital");
            const auto ord = loewner_leq_transfers(prev, next, tol, OrderMode::choi);
            if (!ord.leq)
                throw OrderViolation("map sequence not monotone (choi mode) at step " +
                                     std::to_string(k));
            prefix.push_back(next);
        }
        const double residual = distance(next, prev);
        if (residual <= opt.residual) {
            // The limit must dominate the consumed prefix.
            for (const auto& t : prefix)
                if (!loewner_leq_transfers(t, next, tol, OrderMode::choi).leq)
                    throw OrderViolation("lub does not dominate a sequence member");
            return {next, k, residual};
        }
        prev = next;
    }
    throw NumericError("lub_monotone_maps: no convergence within iteration cap");
}

// --- duality ---------------------------------------------------------------------

NormalState dual_apply(const KrausMap& f, const NormalState& s, double tol) {
    if (s.signature() != f.target()) throw DomainError("dual_apply: signature mismatch");
    const auto& src = f.source();
    std::vector<Matrix> rho;
    for (std::size_t b = 0; b < src.num_blocks(); ++b)
        rho.emplace_back(src.block_dim(b), src.block_dim(b));
    for (const auto& it : f.items())
        rho[it.src_block] += it.k * s.rho(it.dst_block) * it.k.adjoint();
    return NormalState(src, std::move(rho), tol);
}

namespace {

// Permutation sending stack(x) to stack(blockwise transpose of x).
Matrix transpose_permutation(const AlgebraSignature& sig) {
    const std::size_t d = sig.entry_dim();
    Matrix p(d, d);
    for (std::size_t b = 0; b < sig.num_blocks(); ++b) {
        const std::size_t n = sig.block_dim(b);
        const std::size_t off = sig.entry_offset(b);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p.at(off + i * n + j, off + j * n + i) = 1.0;
    }
    return p;
}

}  // namespace

Transfer dual_transfer(const Transfer& t) {
    const Matrix d = transpose_permutation(t.source()) * t.matrix().transpose() *
                     transpose_permutation(t.target());
    return Transfer(t.target(), t.source(), d);
}

Transfer transfer_from_effect_action(
    const std::function<AlgebraElement(const AlgebraElement&)>& effect_action,
    const AlgebraSignature& source, const AlgebraSignature& target) {
    const auto act = [&](const AlgebraElement& x) {
        AlgebraElement out(target);
        // x = p0 - p1 + i p2 - i p3, each part positive and rescaled into the
        // effect interval before the oracle is consulted.
        for (std::size_t b = 0; b < source.num_blocks(); ++b) {
            const auto parts = mat::decompose_general(x.block(b));
            const Complex coeff[4] = {Complex(1, 0), Complex(-1, 0), Complex(0, 1),
                                      Complex(0, -1)};
            for (int p = 0; p < 4; ++p) {
                const double lambda = mat::operator_norm(parts[p]);
                if (lambda <= 1e-14) continue;
                AlgebraElement eff(source);
                eff.block(b) = parts[p];
                eff *= Complex(1.0 / lambda, 0);
                out += coeff[p] * Complex(lambda, 0) * effect_action(eff);
            }
        }
        return out;
    };
    return Transfer::from_action(act, source, target);
}

// --- random maps -----------------------------------------------------------------

KrausMap random_kraus_map(Rng& rng, const AlgebraSignature& source,
                          const AlgebraSignature& target, std::size_t max_items) {
    std::vector<KrausItem> items;
    const auto count = 1 + static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(max_items) - 1));
    for (std::size_t i = 0; i < count; ++i) {
        const auto s = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(source.num_blocks()) - 1));
        const auto d = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(target.num_blocks()) - 1));
        Matrix k(source.block_dim(s), target.block_dim(d));
        for (auto& z : k.data()) z = rng.cgauss() * 0.5;
        items.push_back({s, d, std::move(k)});
    }
    return KrausMap(source, target, std::move(items));
}

KrausMap random_subunital_map(Rng& rng, const AlgebraSignature& source,
                              const AlgebraSignature& target) {
    KrausMap raw = random_kraus_map(rng, source, target);
    const double top = wstar::norm(raw.unit_image());
    if (top <= 1e-12) return raw;
    // Scale f(1) strictly inside [0,1]; occasionally renormalize to unital.
    const double shrink = (0.05 + 0.9 * rng.unit()) / top;
    return raw.scaled(shrink);
}

// --- text format ------------------------------------------------------------------

std::string to_text(const KrausMap& f) {
    std::ostringstream out;
    out << "map " << f.source().to_string() << " -> " << f.target().to_string() << "\n";
    for (const auto& it : f.items()) {
        out << "item " << it.src_block << " " << it.dst_block << "\n";
        mat::write_text(out, it.k);
    }
    return out.str();
}

KrausMap read_kraus(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<AlgebraSignature> src, dst;
    std::vector<KrausItem> items;

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "map") {
            const auto arrow = line.find("->");
            if (arrow == std::string::npos) throw ParseError("map header needs '->'", line_no);
            try {
                src = AlgebraSignature::parse(line.substr(3, arrow - 3));
                dst = AlgebraSignature::parse(line.substr(arrow + 2));
            } catch (const Error& e) {
                throw ParseError(std::string("bad map header: ") + e.what(), line_no);
            }
        } else if (kw == "item") {
            if (!src) throw ParseError("item before map header", line_no);
            std::size_t s = 0, d = 0;
            if (!(ls >> s >> d)) throw ParseError("item needs two block indices", line_no);
            auto k = mat::read_text(in, &line_no);
            if (!k) throw ParseError("item missing its matrix block", line_no);
            items.push_back({s, d, std::move(*k)});
        } else {
            throw ParseError("unknown keyword '" + kw + "'", line_no);
        }
    }
    if (!src || !dst) throw ParseError("missing map header");
    return KrausMap(std::move(*src), std::move(*dst), std::move(items));
}

KrausMap parse_kraus(const std::string& text) {
    std::istringstream in(text);
    return read_kraus(in);
}

}  // namespace qdom::cp
