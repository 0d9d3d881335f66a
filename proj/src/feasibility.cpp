#include "mfmp/feasibility.hpp"

#include <cmath>
#include <sstream>

namespace mfmp {

namespace {

int pinch_interval_of(const std::vector<std::uint8_t>& k) {
    // q = first index with K = 1 (1-based)
    for (std::size_t i = 0; i < k.size(); ++i)
        if (k[i]) return static_cast<int>(i) + 1;
    throw Error("indicator vector has no set entry");
}

ConstraintStatus status_of(double slack, double bind_tol) {
    if (slack < -bind_tol) return ConstraintStatus::Violated;
    if (std::abs(slack) <= bind_tol) return ConstraintStatus::Binding;
    return ConstraintStatus::Satisfied;
}

ConstraintRecord make_record(const std::string& stream, ConstraintFamily fam, int i, double left,
                             double right, double bind_tol, bool enforced, const char* tag) {
    ConstraintRecord r;
    std::ostringstream os;
    os << stream << ":i=" << i << ":" << tag;
    r.id = os.str();
    r.stream = stream;
    r.family = fam;
    r.i = i;
    r.left = left;
    r.right = right;
    r.slack = left - right;
    r.status = status_of(r.slack, bind_tol);
    r.enforced = enforced;
    return r;
}

}  // namespace

std::set<int> feed_index_set(const std::vector<std::uint8_t>& k_top,
                             const std::vector<std::uint8_t>& k_bot) {
    const int c = static_cast<int>(k_top.size()) - 1;
    if (pinch_interval_of(k_top) > pinch_interval_of(k_bot))
        throw PinchOrderViolation("feed pinch ordering q^{TOP} <= q^{BOT} violated");
    std::set<int> out;
    for (int i = 2; i <= c; ++i)
        if (k_top[i - 1] - k_bot[i - 2] == 1) out.insert(i);
    return out;
}

std::set<int> sidedraw_index_set(const std::vector<std::uint8_t>& k_top,
                                 const std::vector<std::uint8_t>& k_bot) {
    const int c = static_cast<int>(k_top.size()) - 1;
    if (pinch_interval_of(k_top) < pinch_interval_of(k_bot))
        throw PinchOrderViolation("sidedraw pinch ordering q^{TOP} >= q^{BOT} violated");
    std::set<int> out;
    for (int i = 2; i <= c; ++i)
        if (k_bot[i - 1] - k_top[i - 2] == 1) out.insert(i);
    return out;
}

std::vector<ConstraintRecord> check_feed(const RootSet& top, const RootSet& bot,
                                         const StreamRoots& rho, const std::set<int>& index_set,
                                         const std::string& stream, double bind_tol,
                                         const CheckOptions& opts) {
    std::vector<ConstraintRecord> out;
    for (int i : index_set) {
        if (!rho.has(i - 1)) continue;  // stream lacks coverage for this interval
        const double r = rho.at(i - 1);
        out.push_back(make_record(stream, ConstraintFamily::FeedUpper, i, top.gamma[i - 1], r,
                                  bind_tol, true, "upper"));
        out.push_back(make_record(stream, ConstraintFamily::FeedLower, i, r, bot.gamma[i - 2],
                                  bind_tol, opts.enforce_feed_lower, "lower"));
    }
    return out;
}

std::vector<ConstraintRecord> check_sidedraw(const RootSet& top, const RootSet& bot,
                                             const StreamRoots& rho, const std::set<int>& index_set,
                                             const std::string& stream, double bind_tol) {
    std::vector<ConstraintRecord> out;
    for (int i : index_set) {
        if (!rho.has(i - 1)) continue;
        const double r = rho.at(i - 1);
        out.push_back(make_record(stream, ConstraintFamily::SideUpper, i, bot.gamma[i - 1], r,
                                  bind_tol, true, "upper"));
        out.push_back(make_record(stream, ConstraintFamily::SideLower, i, r, top.gamma[i - 2],
                                  bind_tol, true, "lower"));
    }
    return out;
}

std::vector<ConstraintRecord> check_sidedraw_on_profile(
    const std::vector<std::uint8_t>& k_top, const std::vector<std::uint8_t>& k_bot,
    const RootSet& top, const RootSet& bot, const StreamRoots& rho, const std::string& stream,
    double bind_tol) {
    const int c = static_cast<int>(k_top.size()) - 1;
    std::vector<ConstraintRecord> out;
    for (int i = 2; i <= c; ++i) {
        if (!rho.has(i - 1)) continue;
        const double r = rho.at(i - 1);
        if (k_top[i - 1])
            out.push_back(make_record(stream, ConstraintFamily::ProfileTopIn, i, top.gamma[i - 1],
                                      r, bind_tol, true, "profile-top-in"));
        if (k_bot[i - 1])
            out.push_back(make_record(stream, ConstraintFamily::ProfileBotIn, i, bot.gamma[i - 1],
                                      r, bind_tol, true, "profile-bot-in"));
    }
    for (int i = 1; i <= c; ++i) {
        if (!rho.has(i)) continue;
        const double r = rho.at(i);
        if (!k_top[i - 1])
            out.push_back(make_record(stream, ConstraintFamily::ProfileTopOut, i, r,
                                      top.gamma[i - 1], bind_tol, true, "profile-top-out"));
        if (!k_bot[i - 1])
            out.push_back(make_record(stream, ConstraintFamily::ProfileBotOut, i, r,
                                      bot.gamma[i - 1], bind_tol, true, "profile-bot-out"));
    }
    return out;
}

}  // namespace mfmp
