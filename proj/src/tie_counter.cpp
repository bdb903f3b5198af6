#include "cotravel/tie_counter.hpp"

#include "cotravel/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace cotravel {

const char* to_string(tie_label l) { return l == tie_label::active ? "active" : "passive"; }

std::optional<tie_label> parse_tie_label(std::string_view s) {
    if (s == "active") return tie_label::active;
    if (s == "passive") return tie_label::passive;
    return std::nullopt;
}

void count_simple(pair_state& state, const sfpg_record& cur) {
    ++state.co_sfpg;
    if (state.seen_pnrs.insert(cur.pnr_key)) ++state.co_pnr;
}

void count_cojourney(pair_state& state, journey_type type) { state.jny.consume(type); }

void count_cojourney(pair_state& state, const cojourney_event& ev) { state.jny.consume(ev.type); }

tie_record label_tie(const passenger_pair& pair, const pair_state& state) {
    if (state.jny.is_null()) {
        throw error(error_kind::consistency,
                    "pair (" + std::to_string(raw(pair.u)) + "," + std::to_string(raw(pair.v)) + ") has " +
                        std::to_string(state.co_sfpg) + " shared SFPGs but no co-journey");
    }
    tie_record t;
    t.pair = pair;
    t.co_sfpg = state.co_sfpg;
    t.co_pnr = state.co_pnr;
    t.co_jny = state.jny.count();
    t.label = t.co_jny == 0 ? tie_label::passive : tie_label::active;
    return t;
}

void write_ties_csv(std::ostream& out, std::span<const tie_record> ties) {
    out << "u,v,co_sfpg,co_pnr,co_jny,label\n";
    for (const auto& t : ties) {
        out << raw(t.pair.u) << ',' << raw(t.pair.v) << ',' << t.co_sfpg << ',' << t.co_pnr << ',' << t.co_jny << ','
            << to_string(t.label) << '\n';
    }
}

namespace {

template <class T>
T parse_number(std::string_view s, std::size_t line) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw parse_error(line, "invalid number '" + std::string(s) + "'");
    }
    return value;
}

} // namespace

std::vector<tie_record> read_ties_csv(std::istream& in) {
    std::vector<tie_record> ties;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<std::string_view> f;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != "u,v,co_sfpg,co_pnr,co_jny,label") throw parse_error(line_no, "unexpected tie header");
            header = true;
            continue;
        }
        f.clear();
        std::string_view rest = line;
        for (auto pos = rest.find(','); pos != std::string_view::npos; pos = rest.find(',')) {
            f.push_back(rest.substr(0, pos));
            rest.remove_prefix(pos + 1);
        }
        f.push_back(rest);
        if (f.size() != 6) throw parse_error(line_no, "expected 6 fields");
        tie_record t;
        const auto u = passenger_id{parse_number<std::uint64_t>(f[0], line_no)};
        const auto v = passenger_id{parse_number<std::uint64_t>(f[1], line_no)};
        if (!(u < v)) throw parse_error(line_no, "tie rows require u < v");
        t.pair = {u, v};
        t.co_sfpg = parse_number<std::uint32_t>(f[2], line_no);
        t.co_pnr = parse_number<std::uint32_t>(f[3], line_no);
        t.co_jny = parse_number<std::uint32_t>(f[4], line_no);
        auto label = parse_tie_label(f[5]);
        if (!label) throw parse_error(line_no, "invalid label '" + std::string(f[5]) + "'");
        t.label = *label;
        ties.push_back(t);
    }
    std::sort(ties.begin(), ties.end(), [](const tie_record& a, const tie_record& b) { return a.pair < b.pair; });
    return ties;
}

std::vector<tie_record> read_ties_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw error(error_kind::missing, "cannot open tie file " + path.string());
    return read_ties_csv(in);
}

} // namespace cotravel
