#include "treels/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "treels/errors.hpp"
#include "treels/rng.hpp"

namespace treels {

namespace {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
};

// Tokenized non-empty lines with '#' comments stripped.
std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream stream(text);
    std::string raw;
    int number = 0;
    while (std::getline(stream, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        Line line;
        line.number = number;
        std::string token;
        while (fields >> token) line.tokens.push_back(token);
        if (!line.tokens.empty()) lines.push_back(line);
    }
    return lines;
}

int parse_int(const Line& line, std::size_t field, const std::string& what) {
    const std::string& token = line.tokens.at(field);
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError(line.number, "expected " + what + ", got '" + token + "'");
    return value;
}

double parse_weight(const Line& line, std::size_t field) {
    const std::string& token = line.tokens.at(field);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value))
        throw ParseError(line.number, "expected a decimal weight, got '" + token + "'");
    return value;
}

int parse_vertex(const Line& line, std::size_t field, int vertex_count) {
    int v = parse_int(line, field, "a vertex");
    if (v < 1 || v > vertex_count)
        throw ParseError(line.number, "vertex " + std::to_string(v) + " outside 1.." +
                                          std::to_string(vertex_count));
    return v - 1;  // to internal 0-based
}

void require_fields(const Line& line, std::size_t count) {
    if (line.tokens.size() != count)
        throw ParseError(line.number, "expected " + std::to_string(count) + " fields, got " +
                                          std::to_string(line.tokens.size()));
}

}  // namespace

std::string format_number(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

WtapInstance parse_wtap(const std::string& text) {
    std::vector<Line> lines = tokenize(text);
    if (lines.empty()) throw ParseError(1, "empty input");
    std::size_t at = 0;

    const Line& header = lines[at++];
    if (header.tokens[0] != "WTAP") throw ParseError(header.number, "expected WTAP header");
    require_fields(header, 3);
    int n = parse_int(header, 1, "vertex count");
    int m = parse_int(header, 2, "link count");
    if (n < 1) throw ParseError(header.number, "vertex count must be positive");
    if (m < 0) throw ParseError(header.number, "link count must be nonnegative");

    if (at >= lines.size()) throw ParseError(header.number, "missing ROOT line");
    const Line& root_line = lines[at++];
    if (root_line.tokens[0] != "ROOT") throw ParseError(root_line.number, "expected ROOT");
    require_fields(root_line, 2);
    int root = parse_vertex(root_line, 1, n);

    std::vector<VertexPair> edges;
    for (int i = 0; i < n - 1; ++i) {
        if (at >= lines.size()) throw ParseError(lines.back().number, "missing EDGE lines");
        const Line& line = lines[at++];
        if (line.tokens[0] != "EDGE") throw ParseError(line.number, "expected EDGE");
        require_fields(line, 3);
        edges.push_back({parse_vertex(line, 1, n), parse_vertex(line, 2, n)});
    }

    WtapInstance instance;
    instance.tree = build_rooted_tree(edges, root);

    for (int i = 0; i < m; ++i) {
        if (at >= lines.size()) throw ParseError(lines.back().number, "missing LINK lines");
        const Line& line = lines[at++];
        if (line.tokens[0] != "LINK") throw ParseError(line.number, "expected LINK");
        require_fields(line, 4);
        Link link;
        link.id = i;
        link.a = parse_vertex(line, 1, n);
        link.b = parse_vertex(line, 2, n);
        link.weight = parse_weight(line, 3);
        if (link.a == link.b)
            throw SelfLoopLink("line " + std::to_string(line.number) + ": link " +
                               line.tokens[1] + " " + line.tokens[2] + " is a self-loop");
        if (link.weight <= 0.0)
            throw NonPositiveWeight("line " + std::to_string(line.number) +
                                    ": link weights must be positive");
        instance.links.push_back(link);
    }
    if (at != lines.size()) throw ParseError(lines[at].number, "trailing content");
    return instance;
}

std::string write_wtap(const WtapInstance& instance) {
    std::ostringstream out;
    out << "WTAP " << instance.tree.vertex_count << ' ' << instance.links.size() << '\n';
    out << "ROOT " << instance.tree.root + 1 << '\n';
    for (const VertexPair& e : instance.tree.edge_ends)
        out << "EDGE " << e.first + 1 << ' ' << e.second + 1 << '\n';
    for (const Link& link : instance.links)
        out << "LINK " << link.a + 1 << ' ' << link.b + 1 << ' ' << format_number(link.weight)
            << '\n';
    return out.str();
}

SteinerInstance parse_stp(const std::string& text) {
    std::vector<Line> lines = tokenize(text);
    SteinerInstance instance;
    bool saw_graph = false, saw_terminals = false;
    int declared_edges = -1, declared_terminals = -1;
    std::size_t at = 0;
    bool saw_eof = false;

    while (at < lines.size()) {
        const Line& line = lines[at];
        if (line.tokens[0] == "EOF") {
            saw_eof = true;
            break;
        }
        if (line.tokens[0] != "SECTION") {
            ++at;  // magic header and other prose outside sections
            continue;
        }
        require_fields(line, 2);
        const std::string section = line.tokens[1];
        ++at;
        if (section == "Graph") {
            saw_graph = true;
            while (at < lines.size() && lines[at].tokens[0] != "END") {
                const Line& entry = lines[at++];
                if (entry.tokens[0] == "Nodes") {
                    require_fields(entry, 2);
                    instance.vertex_count = parse_int(entry, 1, "node count");
                    if (instance.vertex_count < 1)
                        throw ParseError(entry.number, "node count must be positive");
                } else if (entry.tokens[0] == "Edges") {
                    require_fields(entry, 2);
                    declared_edges = parse_int(entry, 1, "edge count");
                } else if (entry.tokens[0] == "E") {
                    require_fields(entry, 4);
                    if (instance.vertex_count == 0)
                        throw ParseError(entry.number, "E line before Nodes declaration");
                    SteinerEdge edge;
                    edge.id = static_cast<int>(instance.edges.size());
                    edge.a = parse_vertex(entry, 1, instance.vertex_count);
                    edge.b = parse_vertex(entry, 2, instance.vertex_count);
                    edge.weight = parse_weight(entry, 3);
                    if (edge.a == edge.b)
                        throw ParseError(entry.number, "self-loop edge");
                    if (edge.weight <= 0.0)
                        throw NonPositiveWeight(
                            "line " + std::to_string(entry.number) +
                            ": nonpositive edge weight; contract zero-weight edges upfront, "
                            "they belong in every solution");
                    instance.edges.push_back(edge);
                } else {
                    throw ParseError(entry.number,
                                     "unexpected '" + entry.tokens[0] + "' in Graph section");
                }
            }
            if (at >= lines.size()) throw ParseError(lines.back().number, "unterminated section");
            ++at;  // END
        } else if (section == "Terminals") {
            saw_terminals = true;
            while (at < lines.size() && lines[at].tokens[0] != "END") {
                const Line& entry = lines[at++];
                if (entry.tokens[0] == "Terminals") {
                    require_fields(entry, 2);
                    declared_terminals = parse_int(entry, 1, "terminal count");
                } else if (entry.tokens[0] == "T") {
                    require_fields(entry, 2);
                    if (instance.vertex_count == 0)
                        throw ParseError(entry.number, "T line before Graph section");
                    instance.terminals.push_back(parse_vertex(entry, 1, instance.vertex_count));
                } else {
                    throw ParseError(entry.number,
                                     "unexpected '" + entry.tokens[0] + "' in Terminals section");
                }
            }
            if (at >= lines.size()) throw ParseError(lines.back().number, "unterminated section");
            ++at;  // END
        } else {
            while (at < lines.size() && lines[at].tokens[0] != "END") ++at;
            if (at >= lines.size()) throw ParseError(lines.back().number, "unterminated section");
            ++at;
        }
    }

    if (!saw_eof) throw ParseError(lines.empty() ? 1 : lines.back().number, "missing EOF keyword");
    if (!saw_graph) throw MissingSection("SECTION Graph not found");
    if (!saw_terminals) throw MissingSection("SECTION Terminals not found");
    if (declared_edges >= 0 && declared_edges != static_cast<int>(instance.edges.size()))
        throw ParseError(1, "Edges declares " + std::to_string(declared_edges) + " but " +
                                std::to_string(instance.edges.size()) + " E lines follow");
    if (declared_terminals >= 0 &&
        declared_terminals != static_cast<int>(instance.terminals.size()))
        throw ParseError(1, "Terminals declares " + std::to_string(declared_terminals) + " but " +
                                std::to_string(instance.terminals.size()) + " T lines follow");
    std::sort(instance.terminals.begin(), instance.terminals.end());
    instance.terminals.erase(std::unique(instance.terminals.begin(), instance.terminals.end()),
                             instance.terminals.end());
    if (instance.terminals.empty()) throw ParseError(1, "instance declares no terminals");
    return instance;
}

std::string write_stp(const SteinerInstance& instance) {
    std::ostringstream out;
    out << "33D32945 STP File, STP Format Version 1.0\n\n";
    out << "SECTION Graph\n";
    out << "Nodes " << instance.vertex_count << '\n';
    out << "Edges " << instance.edges.size() << '\n';
    for (const SteinerEdge& e : instance.edges)
        out << "E " << e.a + 1 << ' ' << e.b + 1 << ' ' << format_number(e.weight) << '\n';
    out << "END\n\n";
    out << "SECTION Terminals\n";
    out << "Terminals " << instance.terminals.size() << '\n';
    for (int t : instance.terminals) out << "T " << t + 1 << '\n';
    out << "END\n\n";
    out << "EOF\n";
    return out.str();
}

namespace {

std::vector<VertexPair> random_attachment_tree(Rng& rng, int n) {
    std::vector<VertexPair> edges;
    for (int v = 1; v < n; ++v)
        edges.push_back({static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v))), v});
    return edges;
}

}  // namespace

WtapInstance gen_wtap(const GeneratorConfig& config) {
    const int n = config.vertex_count;
    if (n < 1) throw ConfigError("vertex_count must be positive");
    if (config.max_weight < 1) throw ConfigError("max_weight must be positive");
    const long long max_pairs = static_cast<long long>(n) * (n - 1) / 2;
    if (config.edge_count > max_pairs)
        throw ConfigError("link count exceeds the number of distinct vertex pairs");

    Rng rng(config.seed);
    WtapInstance instance;
    instance.tree = build_rooted_tree(random_attachment_tree(rng, n), 0);
    if (n == 1) return instance;

    std::vector<char> has_child(n, 0);
    for (int v = 1; v < n; ++v) has_child[instance.tree.parent[v]] = 1;

    std::set<VertexPair> used;
    auto add_link = [&](int a, int b, double weight) {
        Link link;
        link.id = static_cast<int>(instance.links.size());
        link.a = a;
        link.b = b;
        link.weight = weight;
        instance.links.push_back(link);
        used.insert({std::min(a, b), std::max(a, b)});
    };

    // Root links for every leaf keep the full link set a cover.
    for (int v = 1; v < n; ++v)
        if (!has_child[v])
            add_link(0, v, static_cast<double>(rng.next_int(1, config.max_weight)));

    long long target = std::max<long long>(config.edge_count,
                                           static_cast<long long>(instance.links.size()));
    target = std::min(target, max_pairs);
    while (static_cast<long long>(instance.links.size()) < target) {
        int a = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        int b = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        if (a == b) continue;
        VertexPair key{std::min(a, b), std::max(a, b)};
        if (used.count(key)) continue;
        add_link(key.first, key.second, static_cast<double>(rng.next_int(1, config.max_weight)));
    }
    return instance;
}

SteinerInstance gen_steiner(const GeneratorConfig& config) {
    const int n = config.vertex_count;
    if (n < 1) throw ConfigError("vertex_count must be positive");
    if (config.max_weight < 1) throw ConfigError("max_weight must be positive");
    if (config.terminal_count < 1 || config.terminal_count > n)
        throw ConfigError("terminal_count must lie in 1..vertex_count");
    const long long max_pairs = static_cast<long long>(n) * (n - 1) / 2;
    if (config.edge_count < n - 1 || config.edge_count > max_pairs)
        throw ConfigError("edge_count must lie in [n-1, n(n-1)/2]");

    Rng rng(config.seed);
    SteinerInstance instance;
    instance.vertex_count = n;

    std::set<VertexPair> used;
    auto add_edge = [&](int a, int b) {
        SteinerEdge edge;
        edge.id = static_cast<int>(instance.edges.size());
        edge.a = std::min(a, b);
        edge.b = std::max(a, b);
        edge.weight = static_cast<double>(rng.next_int(1, config.max_weight));
        instance.edges.push_back(edge);
        used.insert({edge.a, edge.b});
    };

    for (const VertexPair& e : random_attachment_tree(rng, n)) add_edge(e.first, e.second);
    while (static_cast<int>(instance.edges.size()) < config.edge_count) {
        int a = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        int b = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        if (a == b) continue;
        VertexPair key{std::min(a, b), std::max(a, b)};
        if (used.count(key)) continue;
        add_edge(key.first, key.second);
    }

    std::set<int> terminals;
    while (static_cast<int>(terminals.size()) < config.terminal_count)
        terminals.insert(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))));
    instance.terminals.assign(terminals.begin(), terminals.end());
    return instance;
}

}  // namespace treels
