#include "pcgen/kolmogorov.hpp"

#include <stdexcept>

namespace pcgen {

void ToyMachine::register_routine(int id, std::string name,
                                  std::function<BitString(const BitString &)> fn) {
    if (id < 0 || id > 15)
        throw std::invalid_argument("toy machine: routine id must fit the 4-bit field");
    library_[id] = Routine{std::move(name), std::move(fn)};
}

int ToyMachine::find_routine(const std::string &name) const {
    for (const auto &[id, routine] : library_)
        if (routine.name == name)
            return id;
    return -1;
}

namespace {

struct VmState {
    const BitString &code;
    const ToyMachine &machine;
    uint64_t max_steps;
    const BitString *match;

    BitString output;
    uint64_t steps = 0;
    bool out_of_fuel = false;
    bool mismatch = false;

    bool emit(uint8_t bit) {
        if (match) {
            if (output.size() >= match->size() || (*match)[output.size()] != bit) {
                mismatch = true;
                return false;
            }
        }
        output.push_back(bit);
        return true;
    }

    bool spend(uint64_t cost) {
        if (steps + cost > max_steps) {
            out_of_fuel = true;
            return false;
        }
        steps += cost;
        return true;
    }

    // Reads a width-bit field at pos; false on truncation.
    bool field(size_t &pos, int width, uint64_t &value) {
        if (pos + static_cast<size_t>(width) > code.size())
            return false;
        value = 0;
        for (int i = 0; i < width; ++i)
            value = (value << 1) | code[pos++];
        return true;
    }

    // Elias gamma: floor(log2 n) zeros, then n in binary (leading 1 first).
    bool gamma(size_t &pos, uint64_t &value) {
        int zeros = 0;
        while (pos < code.size() && code[pos] == 0) {
            ++pos;
            ++zeros;
        }
        if (pos >= code.size())
            return false;
        ++pos; // the leading 1
        value = 1;
        for (int i = 0; i < zeros; ++i) {
            if (pos >= code.size())
                return false;
            value = (value << 1) | code[pos++];
        }
        return true;
    }

    // Executes instructions from pos to the end of the code.  Returns false
    // when execution must stop entirely (halt, fuel, mismatch).
    bool exec(size_t pos) {
        while (true) {
            uint64_t op;
            if (!field(pos, 4, op))
                return true; // clean end of code
            switch (op) {
            case 0:
            case 1: {
                if (!spend(1))
                    return false;
                if (!emit(static_cast<uint8_t>(op)))
                    return false;
                break;
            }
            case 2: { // LITERAL
                uint64_t len;
                if (!field(pos, 6, len))
                    return true;
                size_t avail = code.size() - pos;
                size_t take = static_cast<size_t>(len) < avail ? static_cast<size_t>(len) : avail;
                if (!spend(take))
                    return false;
                for (size_t i = 0; i < take; ++i)
                    if (!emit(code[pos + i]))
                        return false;
                pos += take;
                break;
            }
            case 3: { // REPEAT
                uint64_t count;
                if (!field(pos, 8, count))
                    return true;
                for (uint64_t i = 0; i < count; ++i) {
                    if (!spend(1))
                        return false;
                    if (!exec(pos))
                        return false;
                }
                return true; // the remainder was the body
            }
            case 4: { // CALL
                uint64_t id, arg_len;
                if (!field(pos, 4, id))
                    return true;
                if (!gamma(pos, arg_len))
                    return true;
                if (pos + arg_len > code.size())
                    return true;
                auto it = machine.library().find(static_cast<int>(id));
                if (it == machine.library().end())
                    return true; // unregistered routine halts
                BitString arg = code.slice(pos, static_cast<size_t>(arg_len));
                pos += static_cast<size_t>(arg_len);
                BitString out = it->second.fn(arg);
                if (!spend(arg_len + out.size()))
                    return false;
                for (size_t i = 0; i < out.size(); ++i)
                    if (!emit(out[i]))
                        return false;
                break;
            }
            default:
                return true; // HALT and invalid opcodes
            }
        }
    }
};

} // namespace

ToyMachine::RunResult ToyMachine::run(const BitString &code, uint64_t max_steps,
                                      const BitString *match) const {
    VmState vm{code, *this, max_steps, match, {}, 0, false, false};
    vm.exec(0);
    RunResult res;
    res.output = std::move(vm.output);
    res.steps = vm.steps;
    res.halted = !vm.out_of_fuel && !vm.mismatch;
    res.mismatch = vm.mismatch;
    return res;
}

int register_generator(ToyMachine &machine, int id, const GeneratorPtr &g) {
    machine.register_routine(id, g->spec_string(),
                             [g](const BitString &x) { return g->evaluate(x).out; });
    return id;
}

MachineConstants machine_constants() { return {}; }

namespace {

int log_steps(uint64_t steps) { return ceil_log2(steps ? steps : 1); }

KtRecord record_for(const BitString &w, const BitString &code, uint64_t steps, KtMode mode) {
    KtRecord rec;
    rec.w = w;
    rec.program = code;
    rec.steps = steps;
    rec.kt = static_cast<int>(code.size()) + log_steps(steps);
    rec.mode = mode;
    return rec;
}

void check_enum_caps(int max_prog_len, int max_log_t) {
    if (max_prog_len < 0 || max_prog_len > 20)
        throw std::invalid_argument("kt: program length cap must be in [0, 20]");
    if (max_log_t < 0 || max_log_t > 16)
        throw std::invalid_argument("kt: log step cap must be in [0, 16]");
}

} // namespace

std::optional<KtRecord> kt_exact(const ToyMachine &machine, const BitString &w,
                                 int max_prog_len, int max_log_t) {
    check_enum_caps(max_prog_len, max_log_t);
    uint64_t budget = uint64_t(1) << max_log_t;
    std::optional<KtRecord> best;
    for (int len = 0; len <= max_prog_len; ++len) {
        if (best && len >= best->kt)
            break; // longer programs cannot beat the current value
        for (uint64_t bits = 0; bits < (uint64_t(1) << len); ++bits) {
            BitString code = BitString::from_index(bits, len);
            ToyMachine::RunResult res = machine.run(code, budget, &w);
            if (!res.halted || res.output.size() != w.size())
                continue;
            int kt = len + log_steps(res.steps);
            if (!best || kt < best->kt)
                best = record_for(w, code, res.steps, KtMode::Exact);
        }
    }
    return best;
}

std::optional<int> k_fixed_t(const ToyMachine &machine, const BitString &w, uint64_t t_bound,
                             int max_prog_len) {
    check_enum_caps(max_prog_len, 16);
    for (int len = 0; len <= max_prog_len; ++len)
        for (uint64_t bits = 0; bits < (uint64_t(1) << len); ++bits) {
            BitString code = BitString::from_index(bits, len);
            ToyMachine::RunResult res = machine.run(code, t_bound, &w);
            if (res.halted && res.output.size() == w.size())
                return len;
        }
    return std::nullopt;
}

KtRecord kt_upper_print(const ToyMachine &machine, const BitString &w) {
    BitString code;
    size_t pos = 0;
    do {
        size_t chunk = w.size() - pos < 63 ? w.size() - pos : 63;
        code.append(BitString::from_index(2, 4)); // LITERAL
        code.append(BitString::from_index(chunk, 6));
        code.append(w.slice(pos, chunk));
        pos += chunk;
    } while (pos < w.size());
    ToyMachine::RunResult res = machine.run(code, w.size() + 1);
    if (!res.halted || res.output != w)
        throw std::logic_error("kt_upper_print: constructed program failed to print w");
    return record_for(w, code, res.steps, KtMode::UpperBound);
}

namespace {

BitString gamma_encode(uint64_t n) {
    if (n < 1)
        throw std::invalid_argument("gamma_encode: n must be >= 1");
    int width = 0;
    while ((n >> (width + 1)) != 0)
        ++width; // floor(log2 n)
    BitString out(static_cast<size_t>(width)); // the zeros
    out.append(BitString::from_index(n, width + 1));
    return out;
}

} // namespace

KtRecord kt_upper_range(const ToyMachine &machine, const GeneratorPtr &g, int n,
                        const BitString &x) {
    int id = machine.find_routine(g->spec_string());
    if (id < 0)
        throw std::invalid_argument("kt_upper_range: generator " + g->spec_string() +
                                    " is not registered in the machine library");
    if (static_cast<int>(x.size()) != n || !g->admits(n))
        throw std::invalid_argument("kt_upper_range: bad input length");
    BitString w = g->evaluate(x).out;

    BitString code = BitString::from_index(4, 4); // CALL
    code.append(BitString::from_index(static_cast<uint64_t>(id), 4));
    code.append(gamma_encode(static_cast<uint64_t>(n)));
    code.append(x);

    uint64_t budget = static_cast<uint64_t>(n) + w.size() + 1;
    ToyMachine::RunResult res = machine.run(code, budget, nullptr);
    if (!res.halted || res.output != w)
        throw std::logic_error("kt_upper_range: constructed program failed to print g(x)");
    return record_for(w, code, res.steps, KtMode::UpperBound);
}

std::vector<RangeBoundRow> kt_range_bound_scan(const Generator &g, const std::vector<int> &ns) {
    MachineConstants mc;
    std::vector<RangeBoundRow> rows;
    for (int n : ns) {
        RangeBoundRow row;
        row.n = n;
        row.m = g.output_len(n);
        uint64_t steps = static_cast<uint64_t>(n) + static_cast<uint64_t>(row.m);
        row.bound = n + mc.c1 * ceil_log2(static_cast<uint64_t>(n)) + mc.c2 +
                    ceil_log2(steps ? steps : 1);
        row.below_m = row.bound < row.m;
        rows.push_back(row);
    }
    return rows;
}

std::optional<int> kt_range_bound_crossover(const std::vector<RangeBoundRow> &rows) {
    std::optional<int> threshold;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        if (!it->below_m)
            break;
        threshold = it->n;
    }
    return threshold;
}

namespace {

bool factor_into_bytes(int t, std::vector<int> &out) {
    if (t <= 255) {
        out.push_back(t);
        return true;
    }
    for (int d = 255; d >= 2; --d) {
        if (t % d != 0)
            continue;
        out.push_back(d);
        if (factor_into_bytes(t / d, out))
            return true;
        out.pop_back();
    }
    return false;
}

} // namespace

BitString make_repeat_program(const BitString &w, int t) {
    if (t < 1)
        throw std::invalid_argument("make_repeat_program: t must be >= 1");
    std::vector<int> factors;
    if (!factor_into_bytes(t, factors))
        throw std::invalid_argument("make_repeat_program: t has a prime factor above 255");
    BitString code;
    for (int f : factors) {
        code.append(BitString::from_index(3, 4)); // REPEAT
        code.append(BitString::from_index(static_cast<uint64_t>(f), 8));
    }
    size_t pos = 0;
    do {
        size_t chunk = w.size() - pos < 63 ? w.size() - pos : 63;
        code.append(BitString::from_index(2, 4)); // LITERAL
        code.append(BitString::from_index(chunk, 6));
        code.append(w.slice(pos, chunk));
        pos += chunk;
    } while (pos < w.size());
    return code;
}

std::optional<KtSetValue> kt_set_min(const ToyMachine &machine,
                                     const std::vector<BitString> &members, int max_prog_len,
                                     int max_log_t) {
    if (members.empty())
        return std::nullopt;
    bool all_exact = true;
    std::optional<int> exact_min;
    std::optional<int> upper_min;
    for (const auto &w : members) {
        auto exact = kt_exact(machine, w, max_prog_len, max_log_t);
        int upper = kt_upper_print(machine, w).kt;
        if (exact) {
            if (!exact_min || exact->kt < *exact_min)
                exact_min = exact->kt;
            if (exact->kt < upper)
                upper = exact->kt;
        } else {
            all_exact = false;
        }
        if (!upper_min || upper < *upper_min)
            upper_min = upper;
    }
    // With some members out of cap, the in-cap minimum is still exact when it
    // is at most min(caps): any program beating it would itself be in cap.
    int cap_floor = max_prog_len < max_log_t ? max_prog_len : max_log_t;
    if (exact_min && (all_exact || *exact_min <= cap_floor))
        return KtSetValue{*exact_min, KtMode::Exact};
    return KtSetValue{*upper_min, KtMode::UpperBound};
}

} // namespace pcgen
