#include "qrc/classes.h"

#include <charconv>
#include <deque>
#include <sstream>

#include "json.hpp"
#include "qrc/detail/projection_index.h"
#include "qrc/errors.h"
#include "qrc/gates.h"

namespace qrc {

namespace {

int parse_int(std::string_view field, std::string_view whole) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw config_error("malformed class spec '" + std::string(whole) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t pos = 0;
    while (true) {
        size_t end = s.find(sep, pos);
        out.push_back(s.substr(pos, end == std::string_view::npos ? s.size() - pos : end - pos));
        if (end == std::string_view::npos) {
            break;
        }
        pos = end + 1;
    }
    return out;
}

uint64_t binomial(uint64_t n, uint64_t k) {
    if (k > n) {
        return 0;
    }
    uint64_t r = 1;
    for (uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

std::vector<std::vector<int>> subsets_of_size(int n, int size) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto &&self, int start) -> void {
        if (static_cast<int>(cur.size()) == size) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::string join_placements(const std::vector<std::vector<int>> &placements) {
    std::string s;
    for (size_t i = 0; i < placements.size(); ++i) {
        if (i) {
            s += ',';
        }
        for (int q : placements[i]) {
            s += std::to_string(q);
        }
    }
    return s;
}

// Enumerates IQP channels in canonical order: Z subset (outer), nonempty CZ
// subset, then CCZ subsets of size <= max_ccz (by size, then lexicographic).
CircuitClass iqp_family(int n, int max_ccz, ClassSpec spec) {
    const auto pairs = subsets_of_size(n, 2);
    const auto triples = subsets_of_size(n, 3);

    std::vector<std::vector<int>> ccz_choices;  // indices into triples
    for (int size = 0; size <= std::min<int>(max_ccz, static_cast<int>(triples.size())); ++size) {
        for (auto &choice : subsets_of_size(static_cast<int>(triples.size()), size)) {
            ccz_choices.push_back(std::move(choice));
        }
    }

    const cmatrix h = gates::hadamard_layer(n);
    CircuitClass out(n, kChannelTol, std::move(spec));
    for (uint64_t zmask = 0; zmask < (uint64_t{1} << n); ++zmask) {
        for (uint64_t czmask = 1; czmask < (uint64_t{1} << pairs.size()); ++czmask) {
            for (const auto &ccz : ccz_choices) {
                std::vector<std::vector<int>> z, cz, cczp;
                for (int q = 0; q < n; ++q) {
                    if ((zmask >> q) & 1U) {
                        z.push_back({q});
                    }
                }
                for (size_t p = 0; p < pairs.size(); ++p) {
                    if ((czmask >> p) & 1U) {
                        cz.push_back(pairs[p]);
                    }
                }
                for (int t : ccz) {
                    cczp.push_back(triples[static_cast<size_t>(t)]);
                }
                std::vector<std::vector<int>> monomials = z;
                monomials.insert(monomials.end(), cz.begin(), cz.end());
                monomials.insert(monomials.end(), cczp.begin(), cczp.end());
                cmatrix u = h * gates::phase_polynomial(monomials, n) * h;
                std::string label = "iqp[Z:" + join_placements(z) + "|CZ:" + join_placements(cz);
                if (!cczp.empty()) {
                    label += "|CCZ:" + join_placements(cczp);
                }
                label += "]";
                out.insert(unitary_channel(u, std::move(label)));
            }
        }
    }
    return out;
}

}  // namespace

// GateSet --------------------------------------------------------------------

GateSet clifford_generators(int n) {
    GateSet g;
    g.n = n;
    for (int q = 0; q < n; ++q) {
        g.generators.push_back({"H" + std::to_string(q), gates::embed(gates::H(), {q}, n)});
    }
    for (int q = 0; q < n; ++q) {
        g.generators.push_back({"S" + std::to_string(q), gates::embed(gates::S(), {q}, n)});
    }
    for (int c = 0; c < n; ++c) {
        for (int t = 0; t < n; ++t) {
            if (c != t) {
                g.generators.push_back({"CX" + std::to_string(c) + std::to_string(t),
                                        gates::embed(gates::CNOT(), {c, t}, n)});
            }
        }
    }
    return g;
}

// ClassSpec ------------------------------------------------------------------

std::string ClassSpec::str() const {
    switch (family) {
        case Family::stabilizer:
            return "stab:" + std::to_string(n);
        case Family::iqp:
            return "iqp:" + std::to_string(n);
        case Family::stabilizer_plus_t:
            return "stab+T:" + std::to_string(n) + ":" + std::to_string(k) + ":" +
                   std::to_string(depth);
        case Family::iqp_plus_ccz:
            return "iqp+CCZ:" + std::to_string(n) + ":" + std::to_string(k) + ":" +
                   std::to_string(depth);
        case Family::custom:
            break;
    }
    return "custom:" + std::to_string(n) + (note.empty() ? "" : ":" + note);
}

ClassSpec ClassSpec::parse(std::string_view text, std::optional<int> default_n) {
    auto fields = split(text, ':');
    ClassSpec spec;
    const std::string_view family = fields.front();
    if (family == "stab" || family == "iqp") {
        spec.family = family == "stab" ? Family::stabilizer : Family::iqp;
        if (fields.size() == 2) {
            spec.n = parse_int(fields[1], text);
        } else if (fields.size() == 1 && default_n) {
            spec.n = *default_n;
        } else {
            throw config_error("class spec '" + std::string(text) + "' expects family:n");
        }
    } else if (family == "stab+T" || family == "iqp+CCZ") {
        const bool stab = family == "stab+T";
        spec.family = stab ? Family::stabilizer_plus_t : Family::iqp_plus_ccz;
        if (fields.size() == 3) {
            spec.n = default_n.value_or(stab ? 1 : 3);
            spec.k = parse_int(fields[1], text);
            spec.depth = parse_int(fields[2], text);
        } else if (fields.size() == 4) {
            spec.n = parse_int(fields[1], text);
            spec.k = parse_int(fields[2], text);
            spec.depth = parse_int(fields[3], text);
        } else {
            throw config_error("class spec '" + std::string(text) + "' expects family:k:L");
        }
    } else {
        throw config_error("unknown class family in '" + std::string(text) + "'");
    }
    if (spec.k < 0) {
        throw config_error("class spec '" + std::string(text) + "': k must be >= 0");
    }
    if ((spec.family == Family::stabilizer_plus_t || spec.family == Family::iqp_plus_ccz) &&
        spec.depth < 1) {
        throw config_error("class spec '" + std::string(text) + "': depth cap L must be >= 1");
    }
    return spec;
}

// CircuitClass ---------------------------------------------------------------

CircuitClass::CircuitClass(int n, double dedup_tol, ClassSpec spec)
    : n_(n), tol_(dedup_tol), spec_(std::move(spec)) {
    if (n < 0 || n > kMaxQubits) {
        throw guard_error("class qubit count out of range");
    }
    const size_t d2 = size_t{1} << (2 * n);
    index_ = std::make_unique<detail::ProjectionIndex>(d2 * d2, tol_);
}

CircuitClass::CircuitClass(const CircuitClass &other)
    : n_(other.n_),
      tol_(other.tol_),
      spec_(other.spec_),
      channels_(other.channels_),
      index_(std::make_unique<detail::ProjectionIndex>(*other.index_)) {}

CircuitClass::CircuitClass(CircuitClass &&) noexcept = default;

CircuitClass &CircuitClass::operator=(const CircuitClass &other) {
    if (this != &other) {
        CircuitClass tmp(other);
        *this = std::move(tmp);
    }
    return *this;
}

CircuitClass &CircuitClass::operator=(CircuitClass &&) noexcept = default;
CircuitClass::~CircuitClass() = default;

std::optional<size_t> CircuitClass::find(const QuantumChannel &phi) const {
    if (phi.num_qubits() != n_) {
        throw guard_error("channel and class qubit counts differ");
    }
    const double key = index_->key(phi.superop().data());
    return index_->find(key, [&](size_t id) {
        return channel_distance(channels_[id], phi) <= tol_;
    });
}

bool CircuitClass::insert(QuantumChannel phi) {
    if (find(phi)) {
        return false;
    }
    index_->insert(index_->key(phi.superop().data()), channels_.size());
    channels_.push_back(std::move(phi));
    return true;
}

CircuitClass CircuitClass::with_spec(ClassSpec spec) const {
    CircuitClass c(*this);
    c.spec_ = std::move(spec);
    return c;
}

CircuitClass dedupe(const std::vector<QuantumChannel> &channels, double tol) {
    if (channels.empty()) {
        throw guard_error("dedupe needs at least one channel to fix the qubit count");
    }
    ClassSpec spec;
    spec.n = channels.front().num_qubits();
    spec.note = "explicit";
    CircuitClass out(spec.n, tol, spec);
    for (const auto &c : channels) {
        out.insert(c);
    }
    return out;
}

// Clifford -------------------------------------------------------------------

uint64_t clifford_group_order(int n) {
    uint64_t order = uint64_t{1} << (n * n + 2 * n);
    for (int j = 1; j <= n; ++j) {
        order *= (uint64_t{1} << (2 * j)) - 1;
    }
    return order;
}

CircuitClass clifford_class(int n) {
    if (n < 1 || n > 2) {
        throw guard_error("clifford_class supports n in {1, 2}; n = " + std::to_string(n) +
                          " exceeds the closure size guard");
    }
    const GateSet gens = clifford_generators(n);
    std::vector<QuantumChannel> gen_channels;
    for (const auto &g : gens.generators) {
        gen_channels.push_back(unitary_channel(g.unitary, g.name));
    }

    ClassSpec spec;
    spec.family = ClassSpec::Family::stabilizer;
    spec.n = n;
    CircuitClass out(n, kChannelTol, spec);
    out.insert(QuantumChannel::identity(n));
    for (size_t head = 0; head < out.size(); ++head) {
        for (const auto &g : gen_channels) {
            out.insert(compose(g, out[head]));
        }
    }
    if (out.size() != clifford_group_order(n)) {
        throw numerical_error("Clifford closure produced " + std::to_string(out.size()) +
                              " channels, expected " + std::to_string(clifford_group_order(n)));
    }
    return out;
}

uint64_t stabilizer_state_count(int n) {
    const CircuitClass cliffords = clifford_class(n);
    const Eigen::Index d = Eigen::Index{1} << n;
    const cmatrix zero = basis_state(BitString::from_index(0, n)).matrix();

    detail::ProjectionIndex index(static_cast<size_t>(d * d), kChannelTol);
    std::vector<cmatrix> states;
    for (const auto &c : cliffords) {
        cmatrix rho = c.apply(zero);
        const double key = index.key(rho.data());
        auto hit = index.find(key, [&](size_t id) {
            return (states[id] - rho).cwiseAbs().maxCoeff() <= kChannelTol;
        });
        if (!hit) {
            index.insert(key, states.size());
            states.push_back(std::move(rho));
        }
    }
    return states.size();
}

uint64_t stabilizer_state_count_formula(int n) {
    uint64_t r = uint64_t{1} << n;
    for (int j = 1; j <= n; ++j) {
        r *= (uint64_t{1} << j) + 1;
    }
    return r;
}

// IQP ------------------------------------------------------------------------

CircuitClass iqp_class(int n) {
    if (n < 2) {
        throw guard_error("iqp_class needs n >= 2 so that a CZ placement exists");
    }
    if (n > 3) {
        throw guard_error("iqp_class supports n <= 3");
    }
    ClassSpec spec;
    spec.family = ClassSpec::Family::iqp;
    spec.n = n;
    return iqp_family(n, 0, spec);
}

CircuitClass iqp_ccz_class(int n, int k, int depth) {
    if (n < 3) {
        throw guard_error("CCZ augmentation needs n >= 3");
    }
    if (n > 3) {
        throw guard_error("iqp_ccz_class supports n <= 3");
    }
    if (k < 0 || depth < 1) {
        throw guard_error("iqp_ccz_class needs k >= 0 and depth >= 1");
    }
    ClassSpec spec;
    spec.family = ClassSpec::Family::iqp_plus_ccz;
    spec.n = n;
    spec.k = k;
    spec.depth = depth;
    return iqp_family(n, k, spec);
}

uint64_t class_size_bound_iqp(int n, int k) {
    if (n < 2 || n > 10 || k < 0) {
        throw guard_error("class_size_bound_iqp needs 2 <= n <= 10 and k >= 0");
    }
    const uint64_t pairs = binomial(static_cast<uint64_t>(n), 2);
    const uint64_t iqp_size = (uint64_t{1} << n) * ((uint64_t{1} << pairs) - 1);
    const uint64_t placements = binomial(static_cast<uint64_t>(n), 3);
    uint64_t sum = 0;
    for (int j = 0; j <= k; ++j) {
        sum += binomial(placements, static_cast<uint64_t>(j));
    }
    return iqp_size * sum;
}

// Augmentation ---------------------------------------------------------------

CircuitClass augment(const CircuitClass &base, const QuantumChannel &psi, int k, int depth,
                     uint64_t word_budget) {
    if (psi.num_qubits() != base.num_qubits()) {
        throw guard_error("resource channel and class qubit counts differ");
    }
    if (k < 0) {
        throw guard_error("augment needs k >= 0");
    }
    if (depth < 1) {
        throw guard_error("augment needs depth cap L >= 1");
    }

    ClassSpec spec = base.spec();
    if (spec.family == ClassSpec::Family::stabilizer && (psi.label() == "T" || psi.label() == "T0")) {
        spec.family = ClassSpec::Family::stabilizer_plus_t;
    } else {
        spec.family = ClassSpec::Family::custom;
        spec.note = base.spec().str() + "+" + psi.label();
    }
    spec.k = k;
    spec.depth = depth;

    CircuitClass out(base.num_qubits(), base.dedup_tol(), spec);
    std::vector<int> min_uses;  // per element of `out`
    struct Node {
        size_t id;
        int uses;
    };
    uint64_t candidates = 0;

    // Returns true if (phi, uses) is not dominated by an earlier state.
    auto visit = [&](QuantumChannel phi, int uses, std::vector<Node> &frontier) {
        if (++candidates > word_budget) {
            throw guard_error("augment exceeded the candidate word budget of " +
                              std::to_string(word_budget));
        }
        if (auto hit = out.find(phi)) {
            if (min_uses[*hit] <= uses) {
                return;
            }
            min_uses[*hit] = uses;
            frontier.push_back({*hit, uses});
            return;
        }
        out.insert(std::move(phi));
        min_uses.push_back(uses);
        frontier.push_back({out.size() - 1, uses});
    };

    std::vector<Node> frontier;
    for (const auto &b : base) {
        visit(b, 0, frontier);
    }
    if (k >= 1) {
        visit(psi, 1, frontier);
    }
    for (int length = 2; length <= depth; ++length) {
        std::vector<Node> next;
        for (const Node &node : frontier) {
            const QuantumChannel current = out[node.id];
            for (const auto &b : base) {
                visit(compose(b, current), node.uses, next);
            }
            if (node.uses < k) {
                visit(compose(psi, current), node.uses + 1, next);
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) {
            break;
        }
    }
    return out;
}

CircuitClass build_class(const ClassSpec &spec) {
    switch (spec.family) {
        case ClassSpec::Family::stabilizer:
            return clifford_class(spec.n);
        case ClassSpec::Family::iqp:
            return iqp_class(spec.n);
        case ClassSpec::Family::stabilizer_plus_t: {
            auto t = unitary_channel(gates::embed(gates::T(), {0}, spec.n),
                                     spec.n == 1 ? "T" : "T0");
            return augment(clifford_class(spec.n), t, spec.k, spec.depth);
        }
        case ClassSpec::Family::iqp_plus_ccz:
            return iqp_ccz_class(spec.n, spec.k, spec.depth);
        case ClassSpec::Family::custom:
            break;
    }
    throw config_error("custom class specs cannot be rebuilt");
}

std::string class_manifest(const CircuitClass &cls, bool with_payload) {
    nlohmann::ordered_json j;
    j["spec"] = cls.spec().str();
    j["n"] = cls.num_qubits();
    j["dedup_tol"] = cls.dedup_tol();
    j["size"] = cls.size();
    auto items = nlohmann::ordered_json::array();
    for (size_t i = 0; i < cls.size(); ++i) {
        nlohmann::ordered_json item;
        item["index"] = i;
        item["label"] = cls[i].label();
        if (with_payload) {
            item["channel"] = nlohmann::ordered_json::parse(serialize_channel(cls[i]));
        }
        items.push_back(std::move(item));
    }
    j["channels"] = std::move(items);
    return j.dump(2);
}

}  // namespace qrc
