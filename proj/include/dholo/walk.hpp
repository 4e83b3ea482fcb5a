#ifndef DHOLO_WALK_HPP
#define DHOLO_WALK_HPP

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "eisenstein.hpp"
#include "hex_lattice.hpp"

namespace dholo {

/// Non-backtracking walks on the tiling tau_{0,1}.
///
/// Symbols 0..5 are u, v, w, -u, -v, -w with u = 1, v = -j, w = j^2. At a vertex
/// of class 0 the edges are {1, j, j^2} = {u, -v, w}, at class 1 they are
/// {-u, v, -w}. Symbol t may follow s iff t leaves the vertex that s arrives at
/// and t != -s.
class WalkShift {
public:
    using Matrix = std::array<std::array<int, 6>, 6>;

    WalkShift() {
        HexLattice lat({}, {1, 0}, 1);
        for (int s = 0; s < 6; ++s)
            for (int t = 0; t < 6; ++t) {
                // step s ends at a vertex of the other class than the one it leaves
                const int arrival = 1 - leaving_class(s);
                bool edge = false;
                for (const auto& e : lat.edge_vectors(arrival)) edge = edge || e == vector(t);
                a_[s][t] = (edge && !(vector(t) == -vector(s))) ? 1 : 0;
            }
    }

    static const std::array<std::string, 6>& names() {
        static const std::array<std::string, 6> n{"u", "v", "w", "-u", "-v", "-w"};
        return n;
    }

    static EisensteinNumber vector(int s) {
        static const std::array<EisensteinNumber, 3> base{EisensteinNumber(1, 0), -EisensteinNumber::j(),
                                                          EisensteinNumber::j2()};
        return s < 3 ? base[s] : -base[s - 3];
    }

    /// Class of the vertex a step with this symbol leaves (0: edges {1, j, j^2}).
    static int leaving_class(int s) {
        HexLattice lat({}, {1, 0}, 0);
        for (const auto& e : lat.edge_vectors(0))
            if (e == vector(s)) return 0;
        return 1;
    }

    static int symbol_of(const EisensteinNumber& step) {
        for (int s = 0; s < 6; ++s)
            if (vector(s) == step) return s;
        throw input_error("increment is not a tiling edge");
    }

    [[nodiscard]] const Matrix& matrix() const { return a_; }
    [[nodiscard]] bool admissible(int s, int t) const { return a_.at(s).at(t) != 0; }

    [[nodiscard]] bool admissible(const std::vector<int>& word) const {
        for (std::size_t i = 0; i + 1 < word.size(); ++i)
            if (!admissible(word[i], word[i + 1])) return false;
        return true;
    }

    /// Admissible words with n transitions after the given first symbol: row sum of A^n.
    [[nodiscard]] std::uint64_t count_words(std::size_t n, int first) const {
        std::array<std::uint64_t, 6> v{};
        v.fill(1);
        for (std::size_t k = 0; k < n; ++k) {
            std::array<std::uint64_t, 6> next{};
            for (int s = 0; s < 6; ++s)
                for (int t = 0; t < 6; ++t) next[s] += static_cast<std::uint64_t>(a_[s][t]) * v[t];
            v = next;
        }
        return v.at(first);
    }

private:
    Matrix a_{};
};

struct WalkStep {
    std::size_t step = 0;
    int symbol = 0;
    cplx position;
};

struct WalkSample {
    std::vector<WalkStep> steps;
    [[nodiscard]] double final_distance() const { return steps.empty() ? 0.0 : std::abs(steps.back().position); }
};

/// n steps from 0: the first symbol uniform among the three edges at 0, then
/// each step uniform among the two admissible successors.
inline WalkSample walk_sample(const WalkShift& shift, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw input_error("walk length must be >= 1");
    std::mt19937_64 rng(seed);
    WalkSample out;
    std::vector<int> start;
    for (int s = 0; s < 6; ++s)
        if (WalkShift::leaving_class(s) == 0) start.push_back(s);
    int s = start[std::uniform_int_distribution<std::size_t>(0, start.size() - 1)(rng)];
    EisensteinNumber pos = WalkShift::vector(s);
    out.steps.push_back({1, s, pos.to_complex()});
    std::bernoulli_distribution coin(0.5);
    for (std::size_t k = 2; k <= n; ++k) {
        std::array<int, 2> next{};
        int c = 0;
        for (int t = 0; t < 6; ++t)
            if (shift.admissible(s, t)) next[static_cast<std::size_t>(c++)] = t;
        s = next[coin(rng) ? 1 : 0];
        pos += WalkShift::vector(s);
        out.steps.push_back({k, s, pos.to_complex()});
    }
    return out;
}

}  // namespace dholo

#endif  // DHOLO_WALK_HPP
