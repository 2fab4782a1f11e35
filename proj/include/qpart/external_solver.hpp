#pragma once

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "qpart/errors.hpp"
#include "qpart/hmetis.hpp"
#include "qpart/partition.hpp"

namespace qpart {

// External partitioner reached through the file/subprocess exchange: the
// hypergraph is serialized to an hMETIS file, the command runs with the
// substituted tokens, and the partition file it writes is validated and
// re-scored locally. The solver's own cut report is never trusted.
struct ExternalSolverConfig {
  std::string name;
  // Command template; occurrences of {input}, {output}, {k}, {epsilon} and
  // {seed} are substituted before the command runs under /bin/sh -c.
  std::string command;
  std::int64_t timeout_ms = 60000;
};

namespace detail {

inline std::string substitute_tokens(std::string text, const std::string& token, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(token, pos)) != std::string::npos) {
    text.replace(pos, token.size(), value);
    pos += value.size();
  }
  return text;
}

class ScratchDir {
 public:
  ScratchDir() {
    static std::atomic<std::uint64_t> counter{0};
    std::ostringstream name;
    name << "qpart-" << ::getpid() << '-' << counter.fetch_add(1);
    path_ = std::filesystem::temp_directory_path() / name.str();
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Runs `command` under /bin/sh in its own process group; kills the group on
// deadline. Returns the exit status, or throws SolverError on spawn failure
// or timeout.
inline int run_with_deadline(const std::string& command, std::chrono::milliseconds timeout) {
  pid_t pid = ::fork();
  if (pid < 0) throw SolverError(SolverError::Kind::SpawnFailed, "fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    int status = 0;
    pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) {
      if (WIFEXITED(status)) return WEXITSTATUS(status);
      return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      throw SolverError(SolverError::Kind::Timeout,
                        "solver timed out after " + std::to_string(timeout.count()) + " ms");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
}

}  // namespace detail

inline PartitionOutcome partition_external(const PartitionRequest& req, const ExternalSolverConfig& solver) {
  auto t0 = std::chrono::steady_clock::now();
  detail::validate_request(req);
  if (solver.command.empty())
    throw SolverError(SolverError::Kind::SpawnFailed, "solver '" + solver.name + "' has no command configured");

  detail::ScratchDir scratch;
  const std::filesystem::path input = scratch.path() / "hypergraph.hmetis";
  const std::filesystem::path output = scratch.path() / "partition.txt";
  {
    std::ofstream out(input);
    out << write_hmetis(req.hypergraph);
    if (!out) throw SolverError(SolverError::Kind::SpawnFailed, "cannot write " + input.string());
  }

  char epsilon[32];
  std::snprintf(epsilon, sizeof(epsilon), "%g", req.spec.epsilon);
  std::string command = solver.command;
  command = detail::substitute_tokens(std::move(command), "{input}", input.string());
  command = detail::substitute_tokens(std::move(command), "{output}", output.string());
  command = detail::substitute_tokens(std::move(command), "{k}", std::to_string(req.spec.k));
  command = detail::substitute_tokens(std::move(command), "{epsilon}", epsilon);
  command = detail::substitute_tokens(std::move(command), "{seed}", std::to_string(req.seed));

  const std::chrono::milliseconds timeout(req.budget_ms.value_or(solver.timeout_ms));
  int exit_code = detail::run_with_deadline(command, timeout);
  if (exit_code != 0)
    throw SolverError(SolverError::Kind::NonZeroExit,
                      "solver '" + solver.name + "' exited with status " + std::to_string(exit_code));

  std::ifstream in(output);
  if (!in)
    throw SolverError(SolverError::Kind::BadOutput, "solver '" + solver.name + "' produced no output file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  Assignment a;
  try {
    a = read_partition_file(buffer.str(), req.hypergraph.num_vertices, req.spec.k);
  } catch (const FormatError& e) {
    throw SolverError(SolverError::Kind::BadOutput, "solver '" + solver.name + "': " + e.what());
  }
  return detail::make_outcome(solver.name, req, std::move(a), t0);
}

}  // namespace qpart
