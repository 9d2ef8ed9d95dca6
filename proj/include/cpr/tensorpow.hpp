#pragma once

#include "cpr/exactlin.hpp"
#include "cpr/rsystem.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cpr {

enum class Side { Q, P };

inline const char* side_name(Side s) { return s == Side::Q ? "Q" : "P"; }

// An element of R (level 0), of Q^n or of P^n.
struct ModuleElement {
    Side side = Side::Q;
    int level = 0;
    Vec coords;
};

// Balanced tensor power M^n = M^(n-1) (x)_R M as an explicit quotient of the
// free space M^(n-1) (x)_F M.  Each basis vector of the quotient is the image
// of a pure tensor of basis vectors, so it carries a word of level-1 indices.
struct TensorSpace {
    Side side = Side::Q;
    int level = 0;
    std::size_t free_dim = 0;
    QuotientSpace balanced;
    std::vector<std::vector<int>> words;
    std::vector<std::size_t> prefix;  // level n-1 basis index of the section
    std::vector<std::size_t> last;    // level-1 index of the section
    std::vector<std::vector<Vec>> left;   // left[r][i]  = b_r . x_i
    std::vector<std::vector<Vec>> right;  // right[i][r] = x_i . b_r

    std::size_t dim() const { return words.size(); }
};

class TensorTower {
public:
    explicit TensorTower(SystemPtr sys, int cap = 6);

    const RSystem& system() const { return *sys_; }
    const SystemPtr& system_ptr() const { return sys_; }
    int cap() const { return cap_; }

    // Optional on-disk persistence of balanced bases (content-addressed).
    void set_persistent_cache(std::string dir);

    const TensorSpace& space(Side side, int n) const;
    std::size_t dim(Side side, int n) const { return space(side, n).dim(); }

    Vec act_left(Side side, int n, const Vec& r, const Vec& x) const;
    Vec act_right(Side side, int n, const Vec& x, const Vec& r) const;

    // x at level k, y at level l -> image of x (x) y at level k+l.
    Vec embed(Side side, int k, const Vec& x, int l, const Vec& y) const;
    ModuleElement tensor_embed(const ModuleElement& x, const ModuleElement& y) const;

    // Basis vector i of level n is b_1 (x) ... (x) b_n.  For 1 <= k < n this
    // returns the level-k basis index of b_1..b_k and the level-(n-k) vector
    // of b_{k+1}..b_n.
    const std::pair<std::size_t, Vec>& split(Side side, int n, std::size_t i, int k) const;
    Vec word_vector(Side side, const std::vector<int>& letters) const;

    const Vec& psi_basis(int n, std::size_t i, std::size_t j) const;
    Vec psi_n(int n, const Vec& p, const Vec& q) const;
    ModuleElement psi_n(const ModuleElement& p, const ModuleElement& q) const;

private:
    void check_level(int n) const;
    const TensorSpace& build(Side side, int n) const;
    const std::vector<std::vector<Vec>>& embed_table(Side side, int k, int l) const;
    const std::vector<std::vector<Vec>>& psi_table(int n) const;
    const StructuredBimodule& module(Side side) const { return side == Side::Q ? sys_->q : sys_->p; }

    SystemPtr sys_;
    int cap_;
    std::string cache_dir_;
    std::string fingerprint_;

    mutable std::recursive_mutex mu_;
    mutable std::map<std::pair<Side, int>, TensorSpace> spaces_;
    mutable std::map<std::tuple<Side, int, int>, std::vector<std::vector<Vec>>> embeds_;
    mutable std::map<std::tuple<Side, int, std::size_t, int>, std::pair<std::size_t, Vec>> splits_;
    mutable std::map<int, std::vector<std::vector<Vec>>> psi_tables_;
};

using TowerPtr = std::shared_ptr<const TensorTower>;

} // namespace cpr
