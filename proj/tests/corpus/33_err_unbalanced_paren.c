#if (defined(CONFIG_A)
int a;
#endif
