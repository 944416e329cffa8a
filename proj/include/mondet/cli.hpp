#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mondet/determinacy.hpp"
#include "mondet/error.hpp"
#include "mondet/treecode.hpp"

namespace mondet {

// Process exit codes of the command-line front end.
enum ExitCode : int {
    ExitDetermined = 0,
    ExitNotDetermined = 1,
    ExitUnknown = 2,
    ExitUsage = 3,
    ExitUnsupported = 4,
};

int exitCodeFor(VerdictKind k);
// Exit code of an error raised while running a command.
int exitCodeFor(ErrorCode c);

// Runs one command; args excludes the program name.
int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// JSON forms. Objects keep their keys sorted.
nlohmann::json toJson(const Instance& inst);
nlohmann::json toJson(const Verdict& v);
nlohmann::json toJson(const Letter& l);
nlohmann::json toJson(const TreeCode& t);
nlohmann::json toJson(const TreeAutomaton& a);

// INVALID_ARGUMENT on malformed documents.
Letter letterFromJson(const nlohmann::json& j);
TreeCode treeCodeFromJson(const nlohmann::json& j);
TreeAutomaton automatonFromJson(const nlohmann::json& j);

} // namespace mondet
