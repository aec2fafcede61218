#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace arclab {

/// Ordered key-value tree with a line-based text form (2-space indents).
/// Field order is insertion order, so serialization is byte-stable; reports
/// diff cleanly and round-trip exactly.
class KvNode {
  public:
    enum class Kind { Scalar, Map, List };

    KvNode() : kind_(Kind::Map) {}
    static KvNode scalar(std::string v) {
        KvNode n;
        n.kind_ = Kind::Scalar;
        n.value_ = std::move(v);
        return n;
    }
    static KvNode map() { return KvNode(); }
    static KvNode list() {
        KvNode n;
        n.kind_ = Kind::List;
        return n;
    }

    Kind kind() const { return kind_; }
    const std::string& value() const { return value_; }
    const std::vector<std::pair<std::string, KvNode>>& entries() const { return entries_; }
    const std::vector<KvNode>& items() const { return items_; }

    KvNode& put(const std::string& key, KvNode node);
    KvNode& put_scalar(const std::string& key, const std::string& v) { return put(key, scalar(v)); }
    KvNode& put_double(const std::string& key, double v) { return put(key, scalar(format_double(v))); }
    KvNode& put_int(const std::string& key, long long v) { return put(key, scalar(std::to_string(v))); }
    KvNode& put_bool(const std::string& key, bool v) { return put(key, scalar(v ? "true" : "false")); }
    KvNode& append(KvNode node);

    const KvNode* find(const std::string& key) const;
    /// path lookup "a.b.c"
    const KvNode* find_path(const std::string& dotted) const;

    std::string serialize() const;
    static KvNode parse(const std::string& text);

    /// shortest round-trip double formatting (%.17g)
    static std::string format_double(double v);

  private:
    Kind kind_;
    std::string value_;
    std::vector<std::pair<std::string, KvNode>> entries_;
    std::vector<KvNode> items_;
};

struct CheckRecord {
    std::string name;
    std::string claim;   // tag of the statement being verified
    std::string status;  // pass | fail | warn
    std::vector<std::pair<std::string, std::string>> data;
};

/// A verification campaign: config echo, per-check records, optional sweep
/// tables, wall time (always the last line, excluded from determinism
/// comparisons).
class VerificationReport {
  public:
    explicit VerificationReport(std::string tool) : tool_(std::move(tool)) {}

    KvNode& config() { return config_; }
    void add_check(CheckRecord rec) { checks_.push_back(std::move(rec)); }
    void add_sweep(const std::string& name, std::vector<std::string> columns,
                   std::vector<std::vector<double>> rows);
    void set_walltime_ms(long ms) { walltime_ms_ = ms; }

    bool passed() const;
    bool has_warnings() const;
    const std::vector<CheckRecord>& checks() const { return checks_; }

    std::string serialize() const;
    /// the serialized form minus the wall-time line
    static std::string body_of(const std::string& serialized);

  private:
    std::string tool_;
    KvNode config_ = KvNode::map();
    std::vector<CheckRecord> checks_;
    KvNode sweeps_ = KvNode::map();
    long walltime_ms_ = 0;
};

/// Projects a named sweep out of a parsed report as a comma-separated table
/// (header line documents the columns). Throws std::invalid_argument when the
/// sweep is missing.
std::string emit_plot_data(const KvNode& report, const std::string& sweep_name);

}  // namespace arclab
