#include "arclab/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace arclab {

namespace {

bool key_ok(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    return true;
}

bool needs_quoting(const std::string& v) {
    if (v.empty()) return true;
    if (v.front() == ' ' || v.back() == ' ' || v.front() == '-' || v.front() == '"') return true;
    for (char c : v)
        if (c == ':' || c == '\n' || c == '"') return true;
    return false;
}

std::string quote(const std::string& v) {
    std::string out = "\"";
    for (char c : v) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string unquote(const std::string& v) {
    if (v.size() < 2 || v.front() != '"') return v;
    std::string out;
    for (size_t i = 1; i + 1 < v.size(); ++i) {
        char c = v[i];
        if (c == '\\' && i + 2 < v.size()) {
            char n = v[i + 1];
            if (n == 'n') {
                out += '\n';
                ++i;
                continue;
            }
            if (n == '"' || n == '\\') {
                out += n;
                ++i;
                continue;
            }
        }
        out += c;
    }
    return out;
}

void write_node(const KvNode& node, int indent, std::string& out) {
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    if (node.kind() == KvNode::Kind::Map) {
        for (const auto& [k, v] : node.entries()) {
            if (v.kind() == KvNode::Kind::Scalar) {
                const std::string& s = v.value();
                out += pad + k + ": " + (needs_quoting(s) ? quote(s) : s) + "\n";
            } else {
                out += pad + k + "\n";
                write_node(v, indent + 1, out);
            }
        }
    } else if (node.kind() == KvNode::Kind::List) {
        for (const auto& item : node.items()) {
            if (item.kind() == KvNode::Kind::Scalar) {
                const std::string& s = item.value();
                out += pad + "- " + (needs_quoting(s) ? quote(s) : s) + "\n";
            } else {
                out += pad + "-\n";
                write_node(item, indent + 1, out);
            }
        }
    }
}

struct Line {
    int indent;
    std::string text;
};

KvNode parse_block(const std::vector<Line>& lines, size_t& pos, int indent);

KvNode parse_value_block(const std::vector<Line>& lines, size_t& pos, int indent) {
    // decide map vs list from the first child line
    if (pos >= lines.size() || lines[pos].indent < indent) return KvNode::map();
    return parse_block(lines, pos, indent);
}

KvNode parse_block(const std::vector<Line>& lines, size_t& pos, int indent) {
    bool is_list = lines[pos].text[0] == '-' &&
                   (lines[pos].text.size() == 1 || lines[pos].text[1] == ' ');
    KvNode node = is_list ? KvNode::list() : KvNode::map();
    while (pos < lines.size() && lines[pos].indent == indent) {
        const std::string& text = lines[pos].text;
        if (is_list) {
            if (text == "-") {
                ++pos;
                node.append(parse_value_block(lines, pos, indent + 1));
            } else if (text.rfind("- ", 0) == 0) {
                node.append(KvNode::scalar(unquote(text.substr(2))));
                ++pos;
            } else {
                throw std::invalid_argument("KvNode::parse: expected list item");
            }
        } else {
            auto colon = text.find(": ");
            if (colon != std::string::npos) {
                node.put(text.substr(0, colon), KvNode::scalar(unquote(text.substr(colon + 2))));
                ++pos;
            } else {
                std::string key = text;
                if (!key.empty() && key.back() == ':') key.pop_back();
                if (!key_ok(key)) throw std::invalid_argument("KvNode::parse: bad key '" + key + "'");
                ++pos;
                node.put(key, parse_value_block(lines, pos, indent + 1));
            }
        }
        if (pos < lines.size() && lines[pos].indent > indent)
            throw std::invalid_argument("KvNode::parse: unexpected indent");
    }
    return node;
}

}  // namespace

KvNode& KvNode::put(const std::string& key, KvNode node) {
    if (kind_ != Kind::Map) throw std::logic_error("KvNode::put on non-map");
    if (!key_ok(key)) throw std::invalid_argument("KvNode::put: bad key '" + key + "'");
    entries_.emplace_back(key, std::move(node));
    return entries_.back().second;
}

KvNode& KvNode::append(KvNode node) {
    if (kind_ != Kind::List) throw std::logic_error("KvNode::append on non-list");
    items_.push_back(std::move(node));
    return items_.back();
}

const KvNode* KvNode::find(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return &v;
    return nullptr;
}

const KvNode* KvNode::find_path(const std::string& dotted) const {
    const KvNode* cur = this;
    size_t start = 0;
    while (start <= dotted.size() && cur) {
        size_t dot = dotted.find('.', start);
        std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        cur = cur->find(key);
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return cur;
}

std::string KvNode::serialize() const {
    std::string out;
    write_node(*this, 0, out);
    return out;
}

KvNode KvNode::parse(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        if (raw.empty()) continue;
        size_t spaces = raw.find_first_not_of(' ');
        if (spaces == std::string::npos) continue;
        if (spaces % 2 != 0) throw std::invalid_argument("KvNode::parse: odd indent");
        lines.push_back({static_cast<int>(spaces / 2), raw.substr(spaces)});
    }
    if (lines.empty()) return KvNode::map();
    size_t pos = 0;
    KvNode node = parse_block(lines, pos, 0);
    if (pos != lines.size()) throw std::invalid_argument("KvNode::parse: trailing content");
    return node;
}

std::string KvNode::format_double(double v) {
    char buf[40];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void VerificationReport::add_sweep(const std::string& name, std::vector<std::string> columns,
                                   std::vector<std::vector<double>> rows) {
    KvNode sweep = KvNode::map();
    KvNode cols = KvNode::list();
    for (const auto& c : columns) cols.append(KvNode::scalar(c));
    sweep.put("columns", std::move(cols));
    KvNode rows_node = KvNode::list();
    for (const auto& row : rows) {
        KvNode r = KvNode::list();
        for (double v : row) r.append(KvNode::scalar(KvNode::format_double(v)));
        rows_node.append(std::move(r));
    }
    sweep.put("rows", std::move(rows_node));
    sweeps_.put(name, std::move(sweep));
}

bool VerificationReport::passed() const {
    for (const auto& c : checks_)
        if (c.status == "fail") return false;
    return true;
}

bool VerificationReport::has_warnings() const {
    for (const auto& c : checks_)
        if (c.status == "warn") return true;
    return false;
}

std::string VerificationReport::serialize() const {
    KvNode root = KvNode::map();
    root.put_scalar("arclab-report", "1");
    root.put_scalar("tool", tool_);
    root.put("config", config_);
    KvNode checks = KvNode::list();
    for (const auto& c : checks_) {
        KvNode rec = KvNode::map();
        rec.put_scalar("name", c.name);
        rec.put_scalar("claim", c.claim);
        rec.put_scalar("status", c.status);
        for (const auto& [k, v] : c.data) rec.put_scalar(k, v);
        checks.append(std::move(rec));
    }
    root.put("checks", std::move(checks));
    if (!sweeps_.entries().empty()) root.put("sweeps", sweeps_);
    root.put_scalar("overall", passed() ? (has_warnings() ? "warn" : "pass") : "fail");
    std::string out = root.serialize();
    out += "walltime-ms: " + std::to_string(walltime_ms_) + "\n";
    return out;
}

std::string VerificationReport::body_of(const std::string& serialized) {
    auto pos = serialized.rfind("walltime-ms: ");
    if (pos == std::string::npos) return serialized;
    return serialized.substr(0, pos);
}

std::string emit_plot_data(const KvNode& report, const std::string& sweep_name) {
    const KvNode* sweep = report.find_path("sweeps." + sweep_name);
    if (!sweep) throw std::invalid_argument("emit_plot_data: no sweep named '" + sweep_name + "'");
    const KvNode* cols = sweep->find("columns");
    const KvNode* rows = sweep->find("rows");
    std::string out = "# columns: ";
    if (cols) {
        for (size_t i = 0; i < cols->items().size(); ++i) {
            if (i) out += ",";
            out += cols->items()[i].value();
        }
    }
    out += "\n";
    if (rows) {
        for (const auto& row : rows->items()) {
            for (size_t i = 0; i < row.items().size(); ++i) {
                if (i) out += ",";
                out += row.items()[i].value();
            }
            out += "\n";
        }
    }
    return out;
}

}  // namespace arclab
