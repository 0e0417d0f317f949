#if defined(__linux__) && defined(CONFIG_A)
int linux_only;
#endif
