#include <tmr/prompts.hh>

#include <fmt/format.h>

namespace tmr
{
  Prompt render_prompt(const std::vector<std::pair<std::string, std::string>>& examples,
                       std::string_view query,
                       std::size_t shots,
                       const PromptTags& tags)
  {
    Prompt prompt;
    prompt.shots = std::min(shots, examples.size());
    prompt.complete = prompt.shots == shots;
    for (std::size_t i = 0; i < prompt.shots; ++i)
      prompt.text += fmt::format("[{}]: {}. =[{}]: {}\n", tags.source, examples[i].first,
                                 tags.target, examples[i].second);
    prompt.text += fmt::format("[{}]: {}. =[{}]:", tags.source, query, tags.target);
    return prompt;
  }
}
