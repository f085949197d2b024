#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tracekit/error.hpp"

namespace tracekit {

using ProcessId = std::uint32_t;
using Letter = std::uint32_t;
using EventId = std::uint32_t;

// Subset of at most 64 processes.
class ProcessSet {
 public:
  constexpr ProcessSet() = default;
  constexpr explicit ProcessSet(std::uint64_t bits) : bits_(bits) {}

  static ProcessSet of(std::initializer_list<ProcessId> ps) {
    ProcessSet s;
    for (auto p : ps) s.insert(p);
    return s;
  }
  static ProcessSet all(std::size_t n) {
    return ProcessSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }

  void insert(ProcessId p) { bits_ |= std::uint64_t{1} << p; }
  void erase(ProcessId p) { bits_ &= ~(std::uint64_t{1} << p); }
  bool contains(ProcessId p) const { return (bits_ >> p) & 1U; }
  bool intersects(ProcessSet o) const { return (bits_ & o.bits_) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  std::uint64_t bits() const { return bits_; }

  std::vector<ProcessId> members() const {
    std::vector<ProcessId> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1)
      out.push_back(static_cast<ProcessId>(std::countr_zero(b)));
    return out;
  }

  ProcessSet operator|(ProcessSet o) const { return ProcessSet(bits_ | o.bits_); }
  ProcessSet operator&(ProcessSet o) const { return ProcessSet(bits_ & o.bits_); }
  ProcessSet minus(ProcessSet o) const { return ProcessSet(bits_ & ~o.bits_); }
  friend bool operator==(ProcessSet, ProcessSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

// A finite set of processes, an ordered set of letters and the location map.
// Letters with disjoint locations are independent.
class DistributedAlphabet {
 public:
  DistributedAlphabet(std::vector<std::string> processes, std::vector<std::string> letters,
                      std::vector<ProcessSet> locations)
      : processes_(std::move(processes)), letters_(std::move(letters)), loc_(std::move(locations)) {
    if (processes_.empty()) fail(ErrorCode::InvalidAlphabet, "no processes");
    if (processes_.size() > 64) fail(ErrorCode::InvalidAlphabet, "more than 64 processes");
    if (loc_.size() != letters_.size())
      fail(ErrorCode::InvalidAlphabet, "letter and location counts differ");
    for (std::size_t p = 0; p < processes_.size(); ++p)
      if (!process_by_name_.emplace(processes_[p], static_cast<ProcessId>(p)).second)
        fail(ErrorCode::InvalidAlphabet, "duplicate process " + processes_[p]);
    for (std::size_t a = 0; a < letters_.size(); ++a) {
      if (!letter_by_name_.emplace(letters_[a], static_cast<Letter>(a)).second)
        fail(ErrorCode::InvalidAlphabet, "duplicate letter " + letters_[a]);
      if (loc_[a].empty()) fail(ErrorCode::InvalidAlphabet, "letter " + letters_[a] + " has empty location");
      if (loc_[a].minus(ProcessSet::all(processes_.size())).bits() != 0)
        fail(ErrorCode::InvalidAlphabet, "letter " + letters_[a] + " located outside the process set");
      loc_list_.push_back(loc_[a].members());
    }
    process_letters_.resize(processes_.size());
    for (std::size_t a = 0; a < letters_.size(); ++a)
      for (ProcessId p : loc_list_[a]) process_letters_[p].push_back(static_cast<Letter>(a));
    for (std::size_t p = 0; p < processes_.size(); ++p)
      if (process_letters_[p].empty())
        fail(ErrorCode::InvalidAlphabet, "process " + processes_[p] + " has no letters");
  }

  // Builds from a letter list and, per letter, the names of its processes.
  static std::shared_ptr<const DistributedAlphabet> make(
      std::vector<std::string> processes,
      const std::vector<std::pair<std::string, std::vector<std::string>>>& letters) {
    std::map<std::string, ProcessId> pid;
    for (std::size_t p = 0; p < processes.size(); ++p) pid[processes[p]] = static_cast<ProcessId>(p);
    std::vector<std::string> names;
    std::vector<ProcessSet> locs;
    for (const auto& [name, procs] : letters) {
      ProcessSet s;
      for (const auto& pn : procs) {
        auto it = pid.find(pn);
        if (it == pid.end()) fail(ErrorCode::UnknownProcess, pn);
        s.insert(it->second);
      }
      names.push_back(name);
      locs.push_back(s);
    }
    return std::make_shared<const DistributedAlphabet>(std::move(processes), std::move(names),
                                                       std::move(locs));
  }

  std::size_t num_processes() const { return processes_.size(); }
  std::size_t num_letters() const { return letters_.size(); }
  const std::vector<std::string>& process_names() const { return processes_; }
  const std::vector<std::string>& letter_names() const { return letters_; }
  const std::string& process_name(ProcessId p) const { return processes_.at(p); }
  const std::string& letter_name(Letter a) const { return letters_.at(a); }

  ProcessSet loc(Letter a) const { return loc_.at(a); }
  // Processes of loc(a) in ascending order.
  const std::vector<ProcessId>& loc_list(Letter a) const { return loc_list_.at(a); }
  const std::vector<Letter>& letters_of(ProcessId p) const { return process_letters_.at(p); }
  bool independent(Letter a, Letter b) const { return !loc_[a].intersects(loc_[b]); }
  bool dependent(Letter a, Letter b) const { return loc_[a].intersects(loc_[b]); }

  std::optional<Letter> find_letter(const std::string& name) const {
    auto it = letter_by_name_.find(name);
    if (it == letter_by_name_.end()) return std::nullopt;
    return it->second;
  }
  Letter letter(const std::string& name) const {
    auto l = find_letter(name);
    if (!l) fail(ErrorCode::UnknownLetter, name);
    return *l;
  }
  // Accepts a declared name or a 1-based index.
  std::optional<ProcessId> find_process(const std::string& name) const {
    auto it = process_by_name_.find(name);
    if (it != process_by_name_.end()) return it->second;
    if (!name.empty() && std::all_of(name.begin(), name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      auto idx = std::stoul(name);
      if (idx >= 1 && idx <= processes_.size()) return static_cast<ProcessId>(idx - 1);
    }
    return std::nullopt;
  }
  ProcessId process(const std::string& name) const {
    auto p = find_process(name);
    if (!p) fail(ErrorCode::UnknownProcess, name);
    return *p;
  }

  friend bool operator==(const DistributedAlphabet& x, const DistributedAlphabet& y) {
    return x.processes_ == y.processes_ && x.letters_ == y.letters_ && x.loc_ == y.loc_;
  }

 private:
  std::vector<std::string> processes_;
  std::vector<std::string> letters_;
  std::vector<ProcessSet> loc_;
  std::vector<std::vector<ProcessId>> loc_list_;
  std::vector<std::vector<Letter>> process_letters_;
  std::map<std::string, ProcessId> process_by_name_;
  std::map<std::string, Letter> letter_by_name_;
};

using AlphabetPtr = std::shared_ptr<const DistributedAlphabet>;

inline bool same_alphabet(const AlphabetPtr& x, const AlphabetPtr& y) {
  return x == y || (x && y && *x == *y);
}

inline void require_same_alphabet(const AlphabetPtr& x, const AlphabetPtr& y, const std::string& what) {
  if (!same_alphabet(x, y)) fail(ErrorCode::AlphabetMismatch, what);
}

}  // namespace tracekit
