#include "bp/netgraph.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bp {

double distance(const Vec2& p, const Vec2& q) {
    return std::hypot(p.x - q.x, p.y - q.y);
}

Network::Network(std::vector<Vec2> positions, double connect_radius,
                 double interference_radius)
    : pos_(std::move(positions)), connect_radius_(connect_radius),
      interference_radius_(interference_radius < 0 ? connect_radius
                                                   : interference_radius) {
    if (connect_radius_ <= 0)
        throw std::invalid_argument("Network: connect_radius must be positive");
    build_links_from_positions();
    build_adjacency();
}

void Network::build_links_from_positions() {
    links_.clear();
    const int n = node_count();
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (distance(pos_[i], pos_[j]) <= connect_radius_)
                links_.push_back(Link{i, j, 0.0});
    // pairs generated in sorted order already
}

void Network::build_adjacency() {
    adj_.assign(static_cast<size_t>(node_count()), {});
    for (LinkId e = 0; e < link_count(); ++e) {
        adj_[static_cast<size_t>(links_[e].a)].push_back({links_[e].b, e});
        adj_[static_cast<size_t>(links_[e].b)].push_back({links_[e].a, e});
    }
    for (auto& nb : adj_)
        std::sort(nb.begin(), nb.end());
}

LinkId Network::find_link(NodeId i, NodeId j) const {
    for (auto [v, e] : neighbors(i))
        if (v == j) return e;
    return -1;
}

namespace {
bool reachable_all(const std::vector<std::vector<std::pair<NodeId, LinkId>>>& adj) {
    const int n = static_cast<int>(adj.size());
    if (n == 0) return true;
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (auto [u, e] : adj[static_cast<size_t>(v)]) {
            (void)e;
            if (!seen[static_cast<size_t>(u)]) {
                seen[static_cast<size_t>(u)] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == n;
}

bool positions_connected(const std::vector<Vec2>& pos, double radius) {
    const int n = static_cast<int>(pos.size());
    if (n == 0) return true;
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < n; ++u) {
            if (!seen[static_cast<size_t>(u)] &&
                distance(pos[static_cast<size_t>(v)], pos[static_cast<size_t>(u)]) <= radius) {
                seen[static_cast<size_t>(u)] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == n;
}
} // namespace

bool Network::connected() const { return reachable_all(adj_); }

double Network::mean_rate() const {
    if (links_.empty()) return 0.0;
    double s = 0.0;
    for (const Link& l : links_) s += l.rate;
    return s / static_cast<double>(links_.size());
}

void Network::set_rate(LinkId e, double r) {
    if (r <= 0) throw std::invalid_argument("set_rate: rate must be positive");
    links_[static_cast<size_t>(e)].rate = r;
}

LinkDiff Network::rebuild(std::vector<Vec2> positions,
                          const std::function<double()>& new_rate) {
    std::vector<Link> old_links = std::move(links_);
    pos_ = std::move(positions);
    build_links_from_positions();

    LinkDiff diff;
    // old_links and links_ are both sorted by (a, b); merge to diff and carry rates
    size_t io = 0;
    for (LinkId e = 0; e < link_count(); ++e) {
        Link& l = links_[static_cast<size_t>(e)];
        while (io < old_links.size() &&
               std::pair{old_links[io].a, old_links[io].b} < std::pair{l.a, l.b}) {
            diff.destroyed.push_back({old_links[io].a, old_links[io].b});
            ++io;
        }
        if (io < old_links.size() && old_links[io].a == l.a && old_links[io].b == l.b) {
            l.rate = old_links[io].rate;
            ++io;
        } else {
            l.rate = new_rate();
            diff.created.push_back(e);
        }
    }
    for (; io < old_links.size(); ++io)
        diff.destroyed.push_back({old_links[io].a, old_links[io].b});

    build_adjacency();
    return diff;
}

void ConflictGraph::add_conflict(LinkId e, LinkId f) {
    if (e == f) throw std::invalid_argument("add_conflict: self-conflict");
    auto& ne = neighbors_[static_cast<size_t>(e)];
    auto it = std::lower_bound(ne.begin(), ne.end(), f);
    if (it != ne.end() && *it == f) return;
    ne.insert(it, f);
    auto& nf = neighbors_[static_cast<size_t>(f)];
    nf.insert(std::lower_bound(nf.begin(), nf.end(), e), e);
}

bool ConflictGraph::conflicting(LinkId e, LinkId f) const {
    const auto& ne = neighbors_[static_cast<size_t>(e)];
    return std::binary_search(ne.begin(), ne.end(), f);
}

std::size_t ConflictGraph::conflict_count() const {
    std::size_t s = 0;
    for (const auto& nb : neighbors_) s += nb.size();
    return s / 2;
}

ConflictGraph build_conflict_graph(const Network& net) {
    const int m = net.link_count();
    ConflictGraph cg(m);
    const double ir = net.interference_radius();
    for (LinkId e = 0; e < m; ++e) {
        const Link& le = net.link(e);
        for (LinkId f = e + 1; f < m; ++f) {
            const Link& lf = net.link(f);
            bool conflict = (le.a == lf.a || le.a == lf.b || le.b == lf.a ||
                             le.b == lf.b);
            if (!conflict) {
                const Vec2& pa = net.position(le.a);
                const Vec2& pb = net.position(le.b);
                const Vec2& qa = net.position(lf.a);
                const Vec2& qb = net.position(lf.b);
                conflict = distance(pa, qa) <= ir || distance(pa, qb) <= ir ||
                           distance(pb, qa) <= ir || distance(pb, qb) <= ir;
            }
            if (conflict) cg.add_conflict(e, f);
        }
    }
    return cg;
}

Network generate_network(int n, std::uint64_t seed, double target_degree,
                         const GenerateOptions& opts) {
    if (n < 2) throw std::invalid_argument("generate_network: need n >= 2");
    if (target_degree <= 0)
        throw std::invalid_argument("generate_network: target_degree must be positive");
    const double r = opts.connect_radius;
    // Expected degree of a uniform point process in an L x L square is
    // roughly n * pi * r^2 / L^2 (ignoring border effects).
    const double side =
        std::sqrt(static_cast<double>(n) * 3.14159265358979323846 * r * r /
                  target_degree);
    Rng rng(mix_seed(seed, 0x6e657467)); // "netg"
    for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
        std::vector<Vec2> pos(static_cast<size_t>(n));
        for (auto& p : pos) {
            p.x = rng.uniform(0.0, side);
            p.y = rng.uniform(0.0, side);
        }
        if (!positions_connected(pos, r)) continue;
        Network net(std::move(pos), r, opts.interference_radius);
        for (LinkId e = 0; e < net.link_count(); ++e)
            net.set_rate(e, rng.uniform(opts.rate_lo, opts.rate_hi));
        return net;
    }
    throw std::runtime_error(
        "generate_network: no connected instance within retry budget");
}

MobilityReport apply_mobility_step(Network& net, int k_moving, double step_std,
                                   Rng& rng, double rate_lo, double rate_hi,
                                   int max_retries) {
    const int n = net.node_count();
    if (k_moving <= 0 || step_std < 0) return {};
    k_moving = std::min(k_moving, n);

    // Sample k distinct nodes (partial Fisher-Yates).
    std::vector<NodeId> ids(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<size_t>(i)] = i;
    for (int i = 0; i < k_moving; ++i) {
        const auto j = static_cast<size_t>(rng.uniform_int(i, n - 1));
        std::swap(ids[static_cast<size_t>(i)], ids[j]);
    }

    std::vector<Vec2> pos(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) pos[static_cast<size_t>(v)] = net.position(v);

    MobilityReport report;
    for (int i = 0; i < k_moving; ++i) {
        const NodeId v = ids[static_cast<size_t>(i)];
        const Vec2 original = pos[static_cast<size_t>(v)];
        bool accepted = false;
        for (int attempt = 0; attempt < max_retries && !accepted; ++attempt) {
            pos[static_cast<size_t>(v)] = {original.x + rng.gaussian(0.0, step_std),
                                           original.y + rng.gaussian(0.0, step_std)};
            if (positions_connected(pos, net.connect_radius()))
                accepted = true;
        }
        if (!accepted)
            pos[static_cast<size_t>(v)] = original; // stays put
        else
            ++report.moved;
    }

    LinkDiff diff = net.rebuild(std::move(pos),
                                [&] { return rng.uniform(rate_lo, rate_hi); });
    report.created = std::move(diff.created);
    report.destroyed = std::move(diff.destroyed);
    return report;
}

std::vector<int> realize_rates(const Network& net, RateMode mode, Rng& rng) {
    std::vector<int> out(static_cast<size_t>(net.link_count()), 0);
    for (LinkId e = 0; e < net.link_count(); ++e) {
        const double r = net.link(e).rate;
        if (mode == RateMode::deterministic) {
            // nearbyint under the default FE_TONEAREST mode: half-to-even
            out[static_cast<size_t>(e)] = static_cast<int>(std::nearbyint(r));
        } else {
            const auto lo = static_cast<std::int64_t>(std::ceil(0.7 * r));
            const auto hi = static_cast<std::int64_t>(std::floor(1.3 * r));
            out[static_cast<size_t>(e)] =
                static_cast<int>(rng.uniform_int(std::min(lo, hi), std::max(lo, hi)));
        }
        if (out[static_cast<size_t>(e)] < 0) out[static_cast<size_t>(e)] = 0;
    }
    return out;
}

void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_network: cannot open " + path);
    char buf[128];
    out << "bpnet 1\n";
    std::snprintf(buf, sizeof buf, "radius %.17g %.17g\n", net.connect_radius(),
                  net.interference_radius());
    out << buf;
    out << "nodes " << net.node_count() << "\n";
    for (NodeId v = 0; v < net.node_count(); ++v) {
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", v, net.position(v).x,
                      net.position(v).y);
        out << buf;
    }
    out << "links " << net.link_count() << "\n";
    for (LinkId e = 0; e < net.link_count(); ++e) {
        const Link& l = net.link(e);
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", l.a, l.b, l.rate);
        out << buf;
    }
    if (!out) throw std::runtime_error("save_network: write failed: " + path);
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_network: cannot open " + path);
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "bpnet" || version != 1)
        throw std::runtime_error("load_network: bad header in " + path);
    std::string key;
    double cr = 0, ir = 0;
    if (!(in >> key >> cr >> ir) || key != "radius")
        throw std::runtime_error("load_network: expected radius line");
    int n = 0;
    if (!(in >> key >> n) || key != "nodes" || n < 1)
        throw std::runtime_error("load_network: expected nodes line");
    std::vector<Vec2> pos(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int id = 0;
        Vec2 p;
        if (!(in >> id >> p.x >> p.y) || id != i)
            throw std::runtime_error("load_network: bad node record");
        pos[static_cast<size_t>(i)] = p;
    }
    int m = 0;
    if (!(in >> key >> m) || key != "links")
        throw std::runtime_error("load_network: expected links line");
    Network net(std::move(pos), cr, ir);
    if (net.link_count() != m)
        throw std::runtime_error(
            "load_network: link count does not match the radius rule");
    for (int i = 0; i < m; ++i) {
        int a = 0, b = 0;
        double r = 0;
        if (!(in >> a >> b >> r))
            throw std::runtime_error("load_network: bad link record");
        const LinkId e = net.find_link(a, b);
        if (e < 0)
            throw std::runtime_error("load_network: link not implied by positions");
        net.set_rate(e, r);
    }
    return net;
}

} // namespace bp
