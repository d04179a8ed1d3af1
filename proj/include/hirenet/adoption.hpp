#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hirenet/graph.hpp"

namespace hirenet {

struct Publication {
    int year;
    std::string title;
};

struct FacultyCareer {
    std::string faculty_id;
    NodeId phd_institution = -1;
    NodeId job_institution = -1;
    int hire_year = 0;                     // first assistant-professor appointment
    std::vector<Publication> publications; // sorted by year after load
};

struct TopicSpec {
    std::string name;
    std::vector<std::string> keywords; // lowercase phrases, nonempty
};

// Lowercase tokens split on runs of non-alphanumeric characters.
std::vector<std::string> tokenize(std::string_view text);

// Keyword phrases pre-tokenized for repeated matching.
class TopicMatcher {
public:
    explicit TopicMatcher(const TopicSpec& topic);
    bool matches(std::string_view title) const;

private:
    std::vector<std::vector<std::string>> phrases_;
};

// True iff some keyword phrase occurs as a contiguous token run in the title.
bool title_matches(std::string_view title, const TopicSpec& topic);

// Binary per-year flags over one career's publication span.
struct IndicatorSeries {
    int start_year = 0;
    std::vector<std::uint8_t> flags; // flags[i] covers start_year + i

    bool value(int year) const {
        const long long i = static_cast<long long>(year) - start_year;
        return i >= 0 && i < static_cast<long long>(flags.size()) && flags[static_cast<std::size_t>(i)];
    }
    bool empty() const { return flags.empty(); }
};

IndicatorSeries topic_indicator(const FacultyCareer& career, const TopicSpec& topic);

enum class Scenario { Null, Hiring, NonHiring };

std::string_view to_string(Scenario s);

struct DeptClassification {
    NodeId dept = -1;
    Scenario scenario = Scenario::Null;
    std::string adopter_faculty_id; // empty for Null
    int adoption_year = 0;          // hire year (Hiring) or first on-topic year (NonHiring)
};

// One faculty's on-topic activity, the unit the classifier works on. The
// permutation null rebuilds these from shuffled titles without re-matching.
struct FacultyActivity {
    const FacultyCareer* career = nullptr;
    std::vector<int> on_topic_years; // sorted, distinct
};

DeptClassification classify_activity(NodeId dept, std::span<const FacultyActivity> faculty, int grace);

// Classifies one department from raw careers (all with job_institution == dept).
DeptClassification classify_department(NodeId dept, std::span<const FacultyCareer> careers,
                                       const TopicSpec& topic, int grace = 2);

// Groups the corpus by job institution and classifies every department.
// Rows come back sorted by department id.
std::vector<DeptClassification> classify_all(std::span<const FacultyCareer> careers,
                                             const TopicSpec& topic, int grace = 2);

// (#Hiring) / (#Hiring + #NonHiring); absent when no department adopted.
std::optional<double> observed_hiring_fraction(std::span<const DeptClassification> classifications);

struct TransmissionArrow {
    NodeId from; // adopter's doctoral institution
    NodeId to;   // adopting department
    int year;
    std::string faculty_id;
};

std::vector<TransmissionArrow> transmission_arrows(std::span<const DeptClassification> classifications,
                                                   std::span<const FacultyCareer> careers);

// JSON lines, one career per line:
// {"faculty_id":..,"phd_institution":..,"job_institution":..,"hire_year":..,
//  "publications":[{"year":..,"title":..},...]}
std::vector<FacultyCareer> load_careers(std::istream& in, const std::string& filename = "<careers>");

// One phrase per line; '#' comments and blank lines skipped; lowercased.
TopicSpec load_keywords(std::istream& in, const std::string& filename = "<keywords>",
                        const std::string& topic_name = "");

} // namespace hirenet
